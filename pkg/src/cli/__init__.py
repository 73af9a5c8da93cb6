"""Configuration-driven command line: config files, PGM images, CSV traces."""

from src.cli.config_file import load_config, parse_config
from src.cli.csv_trace import CSV_HEADER, emit_csv, trace_to_csv
from src.cli.pgm import decode_pgm, encode_pgm, read_pgm, write_pgm

__all__ = [
    "load_config",
    "parse_config",
    "CSV_HEADER",
    "emit_csv",
    "trace_to_csv",
    "decode_pgm",
    "encode_pgm",
    "read_pgm",
    "write_pgm",
]
