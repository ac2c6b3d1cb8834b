"""
Logger adapter that prefixes every message with the current indent and lets
the logging calls be chained, e.g. `log.info("--> Refining.").add()`.
"""
import logging


class IndentedLoggerAdapter(logging.LoggerAdapter):
    """Wraps a `logging.Logger` and keeps an indent level.

    Parameters
    ----------
    logger : logging.Logger
        Logger to wrap.
    extra : dict, optional
        Passed on to `logging.LoggerAdapter`, by default None.
    spaces : int, optional
        Number of indent characters per level, by default 4.
    indent_char : str, optional
        Character used to indent, by default " ".
    """

    def __init__(self, logger, extra = None, spaces = 4, indent_char = " "):
        super().__init__(logger, extra or {})
        self._current_indent = 0
        self._indent_spaces = spaces
        self._indent_char = indent_char

    def add(self, indent = 1):
        """Increase the indent level, returns self."""
        self._current_indent += indent
        return self

    def sub(self, indent = 1):
        """Decrease the indent level (never below zero), returns self."""
        self._current_indent = max(0, self._current_indent - indent)
        return self

    def indent(self):
        return self._indent_char * (self._indent_spaces * self._current_indent)

    def process(self, msg, kwargs):
        return self.indent() + str(msg), kwargs

    def debug(self, msg, *args, **kwargs):
        super().debug(msg, *args, **kwargs)
        return self

    def info(self, msg, *args, **kwargs):
        super().info(msg, *args, **kwargs)
        return self

    def warning(self, msg, *args, **kwargs):
        super().warning(msg, *args, **kwargs)
        return self

    def error(self, msg, *args, **kwargs):
        super().error(msg, *args, **kwargs)
        return self

