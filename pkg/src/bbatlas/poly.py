"""Even-graded Poincare polynomials stored by half-degree: coeffs[i] is b_{2i}."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PoincarePoly:
    coeffs: tuple[int, ...] = (1,)

    def __post_init__(self):
        c = list(int(x) for x in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c) or (0,))

    @classmethod
    def one(cls) -> "PoincarePoly":
        return cls((1,))

    @classmethod
    def zero(cls) -> "PoincarePoly":
        return cls((0,))

    @classmethod
    def projective(cls, dim: int) -> "PoincarePoly":
        """1 + t^2 + ... + t^{2 dim}."""
        return cls((1,) * (dim + 1))

    @property
    def degree(self) -> int:
        """Real degree (twice the top half-degree)."""
        return 2 * (len(self.coeffs) - 1)

    def __add__(self, other: "PoincarePoly") -> "PoincarePoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return PoincarePoly(tuple(x + y for x, y in zip(a, b)))

    def __mul__(self, other: "PoincarePoly") -> "PoincarePoly":
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return PoincarePoly(tuple(out))

    def shift(self, half_degree: int) -> "PoincarePoly":
        """Multiply by t^{2 * half_degree}."""
        return PoincarePoly((0,) * half_degree + self.coeffs)

    def at_power(self, k: int) -> "PoincarePoly":
        """Substitute t -> t^k."""
        out = [0] * (k * (len(self.coeffs) - 1) + 1)
        for i, x in enumerate(self.coeffs):
            out[k * i] = x
        return PoincarePoly(tuple(out))

    def exact_div(self, m: int) -> "PoincarePoly":
        if any(x % m for x in self.coeffs):
            raise ArithmeticError(f"{self.coeffs} is not divisible by {m}")
        return PoincarePoly(tuple(x // m for x in self.coeffs))

    def at_one(self) -> int:
        return sum(self.coeffs)

    def betti(self, m: int) -> int:
        if m % 2 or m < 0 or m // 2 >= len(self.coeffs):
            return 0
        return self.coeffs[m // 2]

    def is_palindromic(self, degree: int | None = None) -> bool:
        if degree is not None and self.degree != degree:
            return False
        return self.coeffs == self.coeffs[::-1]

    def to_list(self) -> list[int]:
        return list(self.coeffs)

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("t^2" if i == 1 else f"t^{2 * i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms) or "0"
