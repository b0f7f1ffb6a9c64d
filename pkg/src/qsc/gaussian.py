"""Gaussian noise stability: Phi, J_rho and its derivatives, Sheppard's
formula, and Monte Carlo checks on correlated Gaussian vectors."""
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize, special, stats

from .streams import map_chunks, mean_estimate, moments

TAIL_CUTOFF = 8.5
FD_STEP = 1.0e-4
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


def std_normal_cdf(t):
    return special.ndtr(t)


def std_normal_quantile(u):
    return special.ndtri(u)


def std_normal_pdf(t):
    return np.exp(-0.5 * np.asarray(t, float) ** 2) / np.sqrt(2.0 * np.pi)


def sheppard(rho):
    """kappa(rho) = 1 - 2 arccos(rho) / pi."""
    return 1.0 - 2.0 * np.arccos(rho) / np.pi


def guilbaud_constant():
    """Limit of the majority paradox probability for three alternatives."""
    return 1.0 - 3.0 * np.arccos(-1.0 / 3.0) / (2.0 * np.pi)


@dataclass(frozen=True)
class QuadrantParams:
    x: float
    y: float
    rho: float

    def __post_init__(self):
        if not (0.0 < self.x < 1.0 and 0.0 < self.y < 1.0):
            raise ValueError("x and y must lie in (0, 1)")
        if not -1.0 < self.rho < 1.0:
            raise ValueError("rho must lie in (-1, 1)")


def j_rho(x, y=None, rho=None):
    """J_rho(x, y) = P[X <= Phi^-1(x), Y <= Phi^-1(y)] for a rho-correlated pair.

    Accepts a :class:`QuadrantParams` or three numbers.  Evaluated as the
    single integral int_{-inf}^{s} phi(u) Phi((t - rho u)/sqrt(1-rho^2)) du
    with adaptive quadrature, the lower limit cut at -8.5.
    """
    p = x if isinstance(x, QuadrantParams) else QuadrantParams(x, y, rho)
    if p.rho == 0.0:
        return p.x * p.y
    s = float(special.ndtri(p.x))
    t = float(special.ndtri(p.y))
    # integrate over the smaller quantile so the kink sits inside the range less often
    if t < s:
        s, t = t, s
    lo = min(-TAIL_CUTOFF, s - 1.0)
    c = np.sqrt(1.0 - p.rho * p.rho)

    def integrand(u):
        return np.exp(-0.5 * u * u) / np.sqrt(2.0 * np.pi) * special.ndtr((t - p.rho * u) / c)

    kink = t / p.rho
    pts = [kink] if lo < kink < s else None
    val, _ = integrate.quad(integrand, lo, s, points=pts, epsabs=1e-15,
                            epsrel=1e-13, limit=400)
    return float(val)


def j_rho_many(x, y, rho):
    """Vectorised J_rho for arrays, including the edges x or y in {0, 1}.

    Uses Phi(s)Phi(t) + (1/2pi) int_0^{asin rho} exp(-(s^2+t^2-2st sin th)/(2cos^2 th)) dth
    with 64-point Gauss-Legendre; accurate for |rho| <= 0.95.
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    s = np.clip(special.ndtri(np.clip(x, 0.0, 1.0)), -40.0, 40.0)
    t = np.clip(special.ndtri(np.clip(y, 0.0, 1.0)), -40.0, 40.0)
    top = np.arcsin(rho)
    th = 0.5 * top * (_GL_NODES + 1.0)
    sin = np.sin(th)
    cos2 = np.cos(th) ** 2
    ss = s[..., None]
    tt = t[..., None]
    expo = np.exp(-(ss * ss + tt * tt - 2.0 * ss * tt * sin) / (2.0 * cos2))
    extra = 0.5 * top * (expo * _GL_WEIGHTS).sum(axis=-1) / (2.0 * np.pi)
    return special.ndtr(s) * special.ndtr(t) + extra


def j_second_partials(x, y, rho):
    """Closed-form (J_xx, J_xy, J_yy)."""
    s = special.ndtri(x)
    t = special.ndtri(y)
    c = np.sqrt(1.0 - rho * rho)
    a = std_normal_pdf((t - rho * s) / c)
    b = std_normal_pdf((s - rho * t) / c)
    jxx = -rho / c * a / std_normal_pdf(s)
    jyy = -rho / c * b / std_normal_pdf(t)
    jxy = a / (c * std_normal_pdf(t))
    return float(jxx), float(jxy), float(jyy)


def j_hessian_fd(x, y, rho, h=FD_STEP):
    """Central-difference (J_xx, J_xy, J_yy) on the mass scale."""
    f = lambda a, b: j_rho(a, b, rho)
    c = f(x, y)
    jxx = (f(x + h, y) - 2 * c + f(x - h, y)) / (h * h)
    jyy = (f(x, y + h) - 2 * c + f(x, y - h)) / (h * h)
    jxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4 * h * h)
    return jxx, jxy, jyy


def bivariate_density(s, t, rho):
    c2 = 1.0 - rho * rho
    return np.exp(-(s * s - 2 * rho * s * t + t * t) / (2 * c2)) / (2 * np.pi * np.sqrt(c2))


def j_rho_derivative(x, y, rho):
    """dJ/drho, which equals the bivariate normal density at the quantiles."""
    return float(bivariate_density(special.ndtri(x), special.ndtri(y), rho))


def mixed_matrix(hess, sigma):
    jxx, jxy, jyy = hess
    return np.array([[jxx, sigma * jxy], [sigma * jxy, jyy]])


@dataclass(frozen=True)
class DerivativeReport:
    rho: float
    sigmas: tuple
    max_eigenvalue: float
    max_rho_derivative: float
    rho_derivative_bound: float
    max_closed_form_gap: float
    max_third_difference: float
    ok: bool
    rows: tuple


def j_rho_derivative_checks(grid, rho, sigmas=None, h=FD_STEP, rho_step=1e-5):
    """Finite-difference audit of J_rho's Hessian structure and rho-derivative.

    ``grid`` is a 1-D array of mass values; the audit runs over grid x grid.
    Rows are ``(x, y, sigma, max_eig, dJ/drho)``.
    """
    sigmas = (0.0, rho / 2.0, rho) if sigmas is None else tuple(sigmas)
    bound = (1.0 - rho * rho) ** -1.5
    rows = []
    max_eig = -np.inf
    max_drho = 0.0
    gap = 0.0
    third = 0.0
    for x in grid:
        for y in grid:
            hess = j_hessian_fd(x, y, rho, h)
            exact = j_second_partials(x, y, rho)
            gap = max(gap, max(abs(a - b) for a, b in zip(hess, exact)))
            d_rho = (j_rho(x, y, min(rho + rho_step, 0.999999))
                     - j_rho(x, y, rho - rho_step)) / (2 * rho_step)
            max_drho = max(max_drho, abs(d_rho))
            # third derivatives from differences of the exact second partials
            up = j_second_partials(min(x + h, 1 - 1e-9), y, rho)
            dn = j_second_partials(max(x - h, 1e-9), y, rho)
            third = max(third, abs(up[0] - dn[0]) / (2 * h), abs(up[1] - dn[1]) / (2 * h))
            for sg in sigmas:
                eig = float(np.linalg.eigvalsh(mixed_matrix(hess, sg)).max())
                max_eig = max(max_eig, eig)
                rows.append((float(x), float(y), float(sg), eig, float(d_rho)))
    ok = max_eig <= 1e-6 and max_drho <= bound + 1e-6
    return DerivativeReport(float(rho), sigmas, float(max_eig), float(max_drho), float(bound),
                            float(gap), float(third), bool(ok), tuple(rows))


def majority_predictability(rho):
    """Limit of P[maj(x) = maj(y)] style predictability: (2/pi) arcsin(sqrt(rho))."""
    return 2.0 / np.pi * np.arcsin(np.sqrt(rho))


def predictability_crossover():
    """rho in (0,1) where majority and dictator predictability coincide."""
    return optimize.brentq(lambda r: majority_predictability(r) - r, 0.05, 0.95,
                           xtol=1e-14, rtol=1e-15)


# ---------------------------------------------------------------- test functions on R^d

def _parse(spec):
    name, _, rest = spec.partition(":")
    params = {}
    if rest:
        for part in rest.split(","):
            k, eq, v = part.partition("=")
            if not eq:
                raise ValueError(f"expected key=value in {spec!r}")
            params[k.strip()] = float(v)
    return name.strip().lower(), params


class GaussianTestFunction:
    """[0,1]-valued function of a standard Gaussian vector, from a spec string.

    ``halfspace:t=0`` is 1{z_1 <= t}; ``upper:t=0`` is 1{z_1 >= t};
    ``slab:a=-0.5,b=0.5``; ``ball:mass=0.5`` (centred ball);
    ``sigmoid:a=2,t=0`` is 1/(1+exp(a(z_1-t))); ``one``; ``zero``.
    """

    def __init__(self, spec, dim):
        self.spec = spec
        self.dim = dim
        self.name, self.params = _parse(spec)
        if self.name == "ball":
            self.radius = float(np.sqrt(stats.chi2.ppf(self.params.get("mass", 0.5), dim)))
        elif self.name not in ("halfspace", "upper", "slab", "sigmoid", "one", "zero"):
            raise ValueError(f"unknown test function family {self.name!r}")

    def __call__(self, z):
        p = self.params
        if self.name == "halfspace":
            return (z[:, 0] <= p.get("t", 0.0)).astype(float)
        if self.name == "upper":
            return (z[:, 0] >= p.get("t", 0.0)).astype(float)
        if self.name == "slab":
            return ((z[:, 0] >= p["a"]) & (z[:, 0] <= p["b"])).astype(float)
        if self.name == "ball":
            return ((z * z).sum(axis=1) <= self.radius ** 2).astype(float)
        if self.name == "sigmoid":
            return special.expit(-p.get("a", 1.0) * (z[:, 0] - p.get("t", 0.0)))
        if self.name == "one":
            return np.ones(z.shape[0])
        return np.zeros(z.shape[0])

    def mean(self):
        """Exact expectation under the standard Gaussian."""
        p = self.params
        if self.name == "halfspace":
            return float(special.ndtr(p.get("t", 0.0)))
        if self.name == "upper":
            return float(special.ndtr(-p.get("t", 0.0)))
        if self.name == "slab":
            return float(special.ndtr(p["b"]) - special.ndtr(p["a"]))
        if self.name == "ball":
            return float(p.get("mass", 0.5))
        if self.name == "sigmoid":
            a, t = p.get("a", 1.0), p.get("t", 0.0)
            val, _ = integrate.quad(lambda u: std_normal_pdf(u) * special.expit(-a * (u - t)),
                                    -np.inf, np.inf, epsabs=1e-13)
            return float(val)
        return 1.0 if self.name == "one" else 0.0

    @property
    def indicator(self):
        return self.name != "sigmoid"


def correlated_gaussians(dim, rho, size, rng):
    n = rng.standard_normal((size, dim))
    m = rho * n + np.sqrt(1.0 - rho * rho) * rng.standard_normal((size, dim))
    return n, m


def j_rho_closed(x, y, rho):
    """J_rho on the closed square: J(0, y) = 0 and J(1, y) = y."""
    if x <= 0.0 or y <= 0.0:
        return 0.0
    if x >= 1.0:
        return float(y)
    if y >= 1.0:
        return float(x)
    return j_rho(x, y, rho)


@dataclass(frozen=True)
class BorellReport:
    inner: float
    inner_se: float
    functional: float
    functional_se: float
    bound: float
    margin: float
    ok: bool


def borell_mc_check(f_spec, g_spec, rho, dim=2, samples=200_000, seed=0, threads=1):
    """Compare E[f(N) g(M)] and E J_rho(f(N), g(M)) with J_rho(E f, E g)."""
    f = GaussianTestFunction(f_spec, dim)
    g = GaussianTestFunction(g_spec, dim)

    def chunk(rng, size):
        n, m = correlated_gaussians(dim, rho, size, rng)
        fv, gv = f(n), g(m)
        return moments(fv * gv), moments(j_rho_many(fv, gv, rho))

    parts = map_chunks(chunk, seed, samples, threads)
    inner = mean_estimate([p[0] for p in parts])
    func = mean_estimate([p[1] for p in parts])
    bound = j_rho_closed(f.mean(), g.mean(), rho)
    worst = max(func.mean - 3 * func.std_error, inner.mean - 3 * inner.std_error)
    ok = worst <= bound + 1e-12
    return BorellReport(inner.mean, inner.std_error, func.mean, func.std_error, float(bound),
                        float(bound - func.mean), bool(ok))


def reverse_hyp_bound(p1, p2, rho):
    """exp(-(a^2 + b^2 + 2|rho| a b)/(1 - rho^2)) with a^2 = -ln p1, b^2 = -ln p2."""
    a = np.sqrt(-np.log(p1))
    b = np.sqrt(-np.log(p2))
    r = abs(rho)
    return float(np.exp(-(a * a + b * b + 2 * r * a * b) / (1.0 - r * r)))


@dataclass(frozen=True)
class ReverseHypReport:
    p_joint: float
    std_error: float
    p1: float
    p2: float
    bound: float
    ok: bool


def gaussian_reverse_hyp_check(b1_spec, b2_spec, rho, dim=1, samples=200_000, seed=0,
                               threads=1):
    """Monte Carlo P[N in B1, M in B2] against the reverse-hypercontractive bound."""
    b1 = GaussianTestFunction(b1_spec, dim)
    b2 = GaussianTestFunction(b2_spec, dim)
    if not (b1.indicator and b2.indicator):
        raise ValueError("reverse hypercontractivity check needs set indicators")

    def chunk(rng, size):
        n, m = correlated_gaussians(dim, rho, size, rng)
        u, v = b1(n), b2(m)
        return moments(u * v), moments(u), moments(v)

    parts = map_chunks(chunk, seed, samples, threads)
    joint = mean_estimate([p[0] for p in parts])
    m1 = mean_estimate([p[1] for p in parts]).mean
    m2 = mean_estimate([p[2] for p in parts]).mean
    bound = reverse_hyp_bound(m1, m2, rho) if m1 > 0 and m2 > 0 else 0.0
    ok = joint.mean >= bound - 3 * joint.std_error - 1e-12
    return ReverseHypReport(joint.mean, joint.std_error, m1, m2, bound, bool(ok))


# ---------------------------------------------------------------- tournaments

def tournament_edges(k, size, rng):
    """Signs of N_{a>b} = (X_a - X_b + Z_ab)/sqrt(3) for a < b, shape (size, k, k)."""
    x = rng.standard_normal((size, k))
    z = rng.standard_normal((size, k, k))
    z = np.triu(z, 1)
    z = z - np.transpose(z, (0, 2, 1))
    return (x[:, :, None] - x[:, None, :] + z) / np.sqrt(3.0)


@dataclass(frozen=True)
class TournamentReport:
    k: int
    p_unique_max: float
    se_unique_max: float
    p_acyclic: float
    se_acyclic: float
    cov_shared_winner: float


def tournament_mc(k, samples=100_000, seed=0, threads=1):
    """Frequencies of a Condorcet winner and of a transitive outcome."""
    if k < 2:
        raise ValueError("need at least two alternatives")

    def chunk(rng, size):
        n = tournament_edges(k, size, rng)
        beats = n > 0
        wins = beats.sum(axis=2) - 0  # diagonal is zero, never positive
        unique = (wins == k - 1).any(axis=1).astype(float)
        acyc = (np.sort(wins, axis=1) == np.arange(k)).all(axis=1).astype(float)
        if k >= 3:
            cov = n[:, 0, 1] * n[:, 0, 2]
        else:
            cov = np.zeros(size)
        return moments(unique), moments(acyc), moments(cov)

    parts = map_chunks(chunk, seed, samples, threads)
    u = mean_estimate([p[0] for p in parts])
    a = mean_estimate([p[1] for p in parts])
    c = mean_estimate([p[2] for p in parts])
    return TournamentReport(k, u.mean, u.std_error, a.mean, a.std_error, c.mean)
