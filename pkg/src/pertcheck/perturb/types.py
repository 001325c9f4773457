from __future__ import annotations

from dataclasses import asdict, dataclass, field

from ..exceptions import ConfigError, MalformedParams

TASKS = ("MT", "AS", "QG", "DG", "IC", "D2T")
CRITERIA = (
    "fluency", "invariance", "adequacy", "informativeness", "coherence", "non-redundancy",
    "referential-clarity", "answerability", "relevance", "making-sense", "avoid-repetition",
    "listening", "correctness", "thoroughness", "data-coverage", "text-structure",
)


@dataclass(frozen=True)
class Sample:
    """One dataset item. DG context is a tuple of ``{"speaker", "text"}`` dicts."""

    id: str
    task: str
    context: object
    references: tuple
    candidate: str | None = None

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ConfigError("sample id must be a non-empty string")
        if self.task not in TASKS:
            raise ConfigError(f"sample {self.id}: unknown task {self.task!r}")
        refs = tuple(self.references or ())
        if not refs or not all(isinstance(r, str) for r in refs):
            raise ConfigError(f"sample {self.id}: references must be a non-empty list of strings")
        object.__setattr__(self, "references", refs)
        if self.task == "DG":
            ctx = self.context
            if not isinstance(ctx, (list, tuple)) or not ctx:
                raise ConfigError(f"sample {self.id}: DG context needs at least one utterance")
            turns = []
            for u in ctx:
                if not isinstance(u, dict) or "text" not in u:
                    raise ConfigError(f"sample {self.id}: DG utterances need a text field")
                turns.append({"speaker": str(u.get("speaker", "")), "text": str(u["text"])})
            object.__setattr__(self, "context", tuple(turns))

    @property
    def utterances(self):
        """Dialogue turns (empty for non-DG samples)."""
        return self.context if self.task == "DG" else ()

    def to_dict(self):
        ctx = [dict(u) for u in self.context] if self.task == "DG" else self.context
        return {"id": self.id, "task": self.task, "context": ctx,
                "references": list(self.references), "candidate": self.candidate}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(id=d["id"], task=d["task"], context=d.get("context"),
                       references=tuple(d["references"]), candidate=d.get("candidate"))
        except KeyError as exc:
            raise ConfigError(f"sample is missing field {exc.args[0]!r}") from None


def parse_params(text: str) -> tuple:
    """Parse ``key=value;key=value`` into a sorted tuple of pairs."""
    text = (text or "").strip()
    if text in ("", "-"):
        return ()
    out = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        if "=" not in part:
            raise MalformedParams(f"parameter {part!r} is not key=value")
        k, v = (s.strip() for s in part.split("=", 1))
        if not k or k in out:
            raise MalformedParams(f"empty or repeated parameter key in {text!r}")
        out[k] = v
    return tuple(sorted(out.items()))


def format_params(params) -> str:
    return ";".join(f"{k}={v}" for k, v in params) or "-"


@dataclass(frozen=True)
class TemplateSpec:
    template_id: str
    task: str
    criteria: str
    primitive: str
    params: tuple = ()

    @property
    def param_dict(self):
        return dict(self.params)

    @property
    def is_invariance(self):
        return self.criteria == "invariance"

    def applies_to(self, task):
        return self.task == "ALL" or self.task == task

    @property
    def key(self):
        return (self.task, self.criteria, self.primitive, self.params)


@dataclass(frozen=True)
class EditSpan:
    start: int
    end: int
    original: str
    replacement: str


@dataclass(frozen=True)
class PerturbedSample:
    sample_id: str
    template_id: str
    criteria: str
    original: str
    perturbed: str
    edit_spans: tuple
    seed: int
    fills: tuple = ()

    def to_dict(self):
        d = asdict(self)
        d["edit_spans"] = [asdict(e) if not isinstance(e, dict) else e for e in self.edit_spans]
        d["fills"] = [list(f) for f in self.fills]
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(
            sample_id=d["sample_id"], template_id=d["template_id"], criteria=d["criteria"],
            original=d["original"], perturbed=d["perturbed"],
            edit_spans=tuple(EditSpan(**e) for e in d["edit_spans"]), seed=int(d["seed"]),
            fills=tuple(tuple(f) for f in d.get("fills", ())),
        )


@dataclass(frozen=True)
class Skip:
    sample_id: str
    template_id: str
    reason: str


@dataclass
class TestSuite:
    dataset_id: str
    catalog_version: str
    master_seed: int
    items: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    __test__ = False  # not a pytest class

    def counts(self):
        per_template = {}
        for it in self.items:
            per_template.setdefault(it.template_id, [0, 0])[0] += 1
        for sk in self.skipped:
            per_template.setdefault(sk.template_id, [0, 0])[1] += 1
        return {
            "items": len(self.items),
            "skipped": len(self.skipped),
            "per_template": {k: {"items": v[0], "skipped": v[1]} for k, v in sorted(per_template.items())},
        }

    def by_key(self):
        return {(it.sample_id, it.template_id): it for it in self.items}
