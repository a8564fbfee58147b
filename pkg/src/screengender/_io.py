"""Line readers with strict UTF-8 decoding and line-numbered diagnostics."""

from __future__ import annotations

import io
import os
from pathlib import Path
from typing import IO, Iterator, Union

from .errors import IngestError

Source = Union[str, os.PathLike, IO[str], IO[bytes]]


def source_name(source: Source) -> str:
    if isinstance(source, (str, os.PathLike)):
        return str(source)
    return getattr(source, "name", "<stream>")


def iter_lines(source: Source) -> Iterator[tuple[int, str]]:
    """Yield ``(line_number, line)`` pairs with the terminator removed.

    Paths are opened in binary mode so that undecodable bytes can be
    reported with their line number. Both LF and CRLF endings are accepted.
    """
    name = source_name(source)
    if isinstance(source, (str, os.PathLike)):
        path = Path(source)
        try:
            handle = path.open("rb")
        except FileNotFoundError:
            raise IngestError("file not found", name) from None
        except OSError as exc:
            raise IngestError(f"cannot open: {exc.strerror}", name) from None
        with handle:
            yield from _decode_lines(handle, name)
        return
    if isinstance(source, io.TextIOBase):
        try:
            for lineno, line in enumerate(source, 1):
                yield lineno, _chomp(line)
        except UnicodeDecodeError as exc:
            raise IngestError(f"invalid UTF-8 ({exc.reason})", name) from None
        except OSError as exc:
            raise IngestError(f"read failed: {exc}", name) from None
        return
    yield from _decode_lines(source, name)


def _decode_lines(handle: IO[bytes], name: str) -> Iterator[tuple[int, str]]:
    try:
        for lineno, raw in enumerate(handle, 1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise IngestError(f"invalid UTF-8 at byte {exc.start}", name, lineno) from None
            yield lineno, _chomp(line)
    except OSError as exc:
        raise IngestError(f"read failed: {exc}", name) from None


def _chomp(line: str) -> str:
    if line.endswith("\n"):
        line = line[:-1]
    if line.endswith("\r"):
        line = line[:-1]
    return line
