from typing import Any, List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray


class CurveSet:
    """
    One or several curves as float arrays. Without `xs`, points are numbered
    from 1. NaN points are kept and skipped when drawing.
    """

    def __init__(self, ys: Any, xs: Optional[Any] = None) -> None:
        nested = _is_nested(ys)
        self.ys: List[NDArray] = [_floats(y) for y in ys] if nested else [_floats(ys)]
        if xs is None:
            self.xs: List[NDArray] = [
                np.arange(1, len(y) + 1, dtype=float) for y in self.ys
            ]
        elif nested:
            self.xs = [_floats(x) for x in xs]
        else:
            self.xs = [_floats(xs)]

        if [len(x) for x in self.xs] != [len(y) for y in self.ys]:
            raise ValueError("xs and ys must have the same shape")

    def __len__(self) -> int:
        return len(self.ys)

    def __repr__(self) -> str:
        return f"CurveSet(lengths={[len(y) for y in self.ys]})"

    def to_log10(self, axis: str) -> None:
        """
        Take log10 of one axis; non-positive values become NaN.
        """
        transformed = [_log10_or_nan(v) for v in self._axis(axis)]
        if axis == "x":
            self.xs = transformed
        else:
            self.ys = transformed

    def bounds(self, axis: str) -> Tuple[float, float]:
        finite = [v[np.isfinite(v)] for v in self._axis(axis)]
        finite = [v for v in finite if len(v)]
        if not finite:
            return 0.0, 1.0
        return min(float(v.min()) for v in finite), max(float(v.max()) for v in finite)

    ###########
    # private #
    ###########

    def _axis(self, axis: str) -> List[NDArray]:
        if axis not in ("x", "y"):
            raise ValueError(f"Unknown axis '{axis}'")
        return self.xs if axis == "x" else self.ys


def _is_nested(values: Any) -> bool:
    try:
        [iter(v) for v in values]
    except TypeError:
        return False
    return True


def _floats(values: Any) -> NDArray:
    return np.array(values, dtype=float)


def _log10_or_nan(values: NDArray) -> NDArray:
    values = values.copy()
    values[~(values > 0)] = np.nan
    return np.log10(values)
