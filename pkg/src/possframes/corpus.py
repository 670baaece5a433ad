"""The bundled example frames and their golden reports."""
from __future__ import annotations

import pathlib
from importlib import resources

from .audit import audit
from .documents import dumps, load_frame
from .frames import Frame
from .validation import Settings, validate_frame

NAMES = ("watson", "game", "overconfident")
GOLDEN_SEED = 0


def corpus_dir() -> pathlib.Path:
    return pathlib.Path(str(resources.files("possframes") / "corpus"))


def corpus_path(name: str) -> pathlib.Path:
    if name not in NAMES:
        raise KeyError(f"unknown corpus frame {name!r}; expected one of {', '.join(NAMES)}")
    return corpus_dir() / f"{name}.frame"


def load_corpus(name: str, validate: bool = True) -> Frame:
    return load_frame(corpus_path(name), validate=validate)


def golden_reports(frame: Frame, seed: int = GOLDEN_SEED) -> dict[str, str]:
    """Canonical validation and audit reports of a frame, keyed by file name."""
    out = {f"{frame.name}.validation.json": dumps(validate_frame(frame, Settings(seed=seed)).to_dict())}
    for agent in sorted(frame.agents):
        rep = audit(frame, ("all",), mode="exhaustive", seed=seed, agent=agent)
        out[f"{frame.name}.{agent}.audit.json"] = dumps(rep.to_dict())
    return out


def golden_files() -> list[pathlib.Path]:
    return sorted(corpus_dir().glob("*.json"))


def install(target) -> list[pathlib.Path]:
    """Copy the corpus frames and golden reports into ``target``."""
    target = pathlib.Path(target)
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for src in [corpus_path(n) for n in NAMES] + golden_files():
        dst = target / src.name
        dst.write_bytes(src.read_bytes())
        written.append(dst)
    return written
