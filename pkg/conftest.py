# Repository root on sys.path so ``ramsey_lgi`` and the plugin ``tools`` package import in tests.
