from dataclasses import asdict, dataclass, fields

from .attention import check_pooling, check_variant


@dataclass
class TrainConfig:
    learning_rate: float = 0.001
    batch_size: int = 100
    hidden: int = 100
    d: int = 300
    dropout: float = 0.2
    max_len: int = 50
    epochs: int = 10
    seed: int = 0
    variant: str = "diff"
    pooling: str = "avg"
    joint_dim: int = 100
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    order: str = "original_first"
    class_weights: tuple = None
    val_fraction: float = 0.1

    def __post_init__(self):
        self.validate()

    def validate(self):
        for name in ("batch_size", "hidden", "d", "max_len", "joint_dim"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be a positive integer, got {getattr(self, name)}")
        if self.epochs < 0:
            raise ValueError("epochs must be non-negative")
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be non-negative")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must lie in [0, 1)")
        if not 0.0 <= self.val_fraction < 1.0:
            raise ValueError("val_fraction must lie in [0, 1)")
        if self.order not in ("original_first", "synthetic_first"):
            raise ValueError(f"unknown order {self.order!r}")
        check_variant(self.variant)
        check_pooling(self.pooling)
        if self.class_weights is not None:
            self.class_weights = tuple(float(w) for w in self.class_weights)
            if len(self.class_weights) != 2 or min(self.class_weights) <= 0:
                raise ValueError("class_weights must be two positive numbers")

    def to_dict(self):
        out = asdict(self)
        if out["class_weights"] is not None:
            out["class_weights"] = list(out["class_weights"])
        return out

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def replace(self, **changes):
        return type(self).from_dict({**self.to_dict(), **changes})
