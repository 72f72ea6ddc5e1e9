import logging


def setup_logging(level="INFO"):
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format='%(asctime)s [%(levelname)s] %(name)s: %(message)s'
    )


def get_logger(name="heatkit"):
    if name != "heatkit" and not name.startswith("heatkit."):
        name = f"heatkit.{name}"
    return logging.getLogger(name)
