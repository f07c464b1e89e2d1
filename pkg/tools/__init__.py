from .classical import ClassicalTool
from .correlate import CorrelateTool
from .decoherence import DecoherenceTool
from .lgi_sweep import LgiSweepTool
from .verify import VerifyTool
from .wigner import WignerTool

__all__ = ['ClassicalTool', 'CorrelateTool', 'DecoherenceTool', 'LgiSweepTool', 'VerifyTool', 'WignerTool']
