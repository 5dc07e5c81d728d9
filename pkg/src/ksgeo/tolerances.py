"""Numeric tolerances shared by every module."""

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    norm: float = 1e-9       # |v| = 1 check
    orth: float = 1e-9       # inner products, determinants
    plane: float = 1e-9      # gnomonic plane coordinates
    ang: float = 1e-9        # radians
    lat_deg: float = 1e-6    # degeneracy band around pole and equator, degrees
    canon: float = 1e-12     # sign canonicalization threshold
    merge: float = 1e-7      # radians; projective dedup radius
    parallel: float = 1e-6   # |a x b| below this counts as parallel

    def override(self, **kw) -> "Tolerances":
        known = {f.name for f in fields(self)}
        bad = set(kw) - known
        if bad:
            raise KeyError(f"unknown tolerance(s): {sorted(bad)}")
        return replace(self, **{k: float(v) for k, v in kw.items()})

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT = Tolerances()
