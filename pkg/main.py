import logging

from dify_plugin import Plugin, DifyPluginEnv

from ramsey_lgi.cli import LOG_FORMAT

logging.basicConfig(level=logging.INFO, format=LOG_FORMAT)

# 扫描与数值校验耗时较长
plugin = Plugin(DifyPluginEnv(MAX_REQUEST_TIMEOUT=600))

if __name__ == '__main__':
    plugin.run()
