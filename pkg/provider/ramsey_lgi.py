from typing import Any, List
from dify_plugin import ToolProvider
from tools.classical import ClassicalTool
from tools.correlate import CorrelateTool
from tools.decoherence import DecoherenceTool
from tools.lgi_sweep import LgiSweepTool
from tools.verify import VerifyTool
from tools.wigner import WignerTool


class RamseyLgiProvider(ToolProvider):
    """Sequential Ramsey measurement simulator tool provider"""

    def _validate_credentials(self, credentials: dict[str, Any]) -> None:
        """
        验证凭据（纯本地计算，不需要凭据）
        """
        pass

    def _get_tools(self) -> List[Any]:
        """
        返回可用的工具列表，与命令行子命令一一对应
        """
        return [
            CorrelateTool,
            LgiSweepTool,
            WignerTool,
            ClassicalTool,
            DecoherenceTool,
            VerifyTool,
        ]


# 创建provider实例
ramsey_lgi_provider = RamseyLgiProvider()
