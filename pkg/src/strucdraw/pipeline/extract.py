"""Pull the final answer out of a completion."""

from __future__ import annotations

OPEN = "<result>"
CLOSE = "</result>"


class ExtractionFailed(ValueError):
    pass


class NoResultBlock(ExtractionFailed):
    pass


class UnterminatedResultBlock(ExtractionFailed):
    pass


def extract_result(completion: str) -> str:
    """Text between the last ``<result>``/``</result>`` pair, stripped.

    Models often echo the format instructions (which mention the tags) before
    answering, so the last pair is the answer. An opening tag after the last
    closing tag means the answer was cut off.
    """
    end = completion.rfind(CLOSE)
    last_open = completion.rfind(OPEN)
    if end < 0:
        if last_open >= 0:
            raise UnterminatedResultBlock("found <result> without a closing </result>")
        raise NoResultBlock("completion has no <result> block")
    if last_open > end:
        raise UnterminatedResultBlock("final <result> block is not closed")
    start = completion.rfind(OPEN, 0, end)
    if start < 0:
        raise NoResultBlock("found </result> without an opening <result>")
    return completion[start + len(OPEN):end].strip()


def wrap_result(text: str) -> str:
    return f"{OPEN}\n{text}\n{CLOSE}"
