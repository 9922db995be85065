"""File logging for CLI runs and batch workers."""
import logging
import os

from mspp_enhance.utils.constants import DEFAULT_LOG_FILE, DEFAULT_LOG_LEVEL


LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def setup_logging(config, worker_name="mspp"):
    """Route the root logger to the configured file.

    Records carry the process id and, for batch cells run in the thread
    pool, the worker thread name. Calling this again replaces the previous
    handler, so each CLI invocation logs to its own configured file.

    Args:
        config: Full configuration or just its 'logging' section
        worker_name: Prefix for every record (default: 'mspp')
    """
    logging_config = config.get('logging', config) if isinstance(config, dict) else config
    log_file = logging_config.get('file', DEFAULT_LOG_FILE)
    log_level = logging_config.get('level', DEFAULT_LOG_LEVEL)

    log_dir = os.path.dirname(log_file)
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)

    logging.basicConfig(
        filename=log_file,
        level=getattr(logging, log_level),
        datefmt=LOG_DATE_FORMAT,
        format=f"[{worker_name}.{os.getpid()}] %(asctime)s - %(threadName)s - %(name)s - %(levelname)s - %(message)s",
        force=True,
    )
