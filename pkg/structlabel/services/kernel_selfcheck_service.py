"""Invariant suite behind ``kernels-selfcheck``.

Each check returns a measured residual and its tolerance; a check passes
when ``residual <= tolerance``. All randomness comes from one seeded
generator so reports are reproducible.
"""

import math
from collections.abc import Callable

import numpy as np

from structlabel.config.logger_config import get_logger
from structlabel.config.settings import get_settings
from structlabel.models.kernel_models import AdversarialBatch, BitSignal, CheckResult, NoiseSchedule
from structlabel.models.run_schemas import RunConfig
from structlabel.services import label_kernel_service as kernels

logger = get_logger("KernelSelfcheck")

MAX_LABEL_COUNT = 1024
FALLBACK_MAX_LABEL_COUNT = 64
MONTE_CARLO_DRAWS = 100_000
DENOISE_INSTANCES = 1000
DENOISE_MAX_TOKENS = 16
DENOISE_MAX_BITS = 8
DISC_ROWS = 10_000


def _result(name: str, residual: float, tolerance: float) -> CheckResult:
    return CheckResult(name=name, residual=float(residual), tolerance=tolerance, passed=bool(residual <= tolerance))


class KernelSelfcheck:
    """Numeric checks of the label kernels for one schedule configuration."""

    def __init__(self, sched: NoiseSchedule, s: int, seed: int, tau: float):
        self.sched = sched
        self.s = s
        self.seed = seed
        self.tau = tau
        self.rng = np.random.default_rng(seed)

    def schedule_monotone(self) -> CheckResult:
        # count of non-decreasing steps, plus the (0, 1) bounds on alpha_bar_1..T
        ab = self.sched.alpha_bar
        violations = int(np.sum(np.diff(ab) >= 0)) + int(np.sum((ab[1:] <= 0) | (ab[1:] >= 1)))
        return _result("schedule_monotone", violations, 0)

    def alpha_bar_product(self) -> CheckResult:
        product = 1.0
        for t in range(1, self.sched.T + 1):
            product *= 1.0 - self.sched.beta_at(t)
        return _result("alpha_bar_product", abs(product - self.sched.alpha_bar[-1]), 1e-12)

    def bit_roundtrip(self) -> CheckResult:
        mismatches = 0
        for count in range(2, MAX_LABEL_COUNT + 1):
            ids = list(range(count))
            decoded = kernels.bit2tag(kernels.tag2bit(ids, count), count, fallback=0)
            mismatches += sum(a != b for a, b in zip(ids, decoded))
        return _result("bit_roundtrip", mismatches, 0)

    def bit_fallback(self) -> CheckResult:
        mismatches = 0
        for count in range(3, FALLBACK_MAX_LABEL_COUNT + 1):
            if count & (count - 1) == 0:
                continue
            m = kernels.bit_width(count)
            codes = np.arange(2**m)
            bits = (codes[:, None] >> np.arange(m - 1, -1, -1)) & 1
            fallback = count - 1
            decoded = kernels.bit2tag(BitSignal(values=bits * 2.0 - 1.0), count, fallback)
            expected = [int(c) if c < count else fallback for c in codes]
            mismatches += sum(a != b for a, b in zip(decoded, expected))
        return _result("bit_fallback", mismatches, 0)

    def forward_monte_carlo(self) -> CheckResult:
        """Pooled mean error in units of 3 sigma/sqrt(N), and variance error in units of 2%."""
        t = max(1, self.sched.T // 2)
        x0 = kernels.tag2bit([0, 1, 2, 3], 4).values
        tiled = BitSignal(values=np.tile(x0, (MONTE_CARLO_DRAWS, 1)))
        e = self.rng.standard_normal(tiled.shape)
        x_t = kernels.forward_latent(tiled, t, e, self.sched).values.reshape(MONTE_CARLO_DRAWS, *x0.shape)

        a = self.sched.alpha_bar[t]
        sigma = math.sqrt(1.0 - a)
        centred = x_t - math.sqrt(a) * x0
        mean_error = abs(centred.mean()) / (3 * sigma / math.sqrt(centred.size))
        variance_error = np.max(np.abs(x_t.var(axis=0) / (1.0 - a) - 1.0)) / 0.02
        return _result("forward_monte_carlo", max(mean_error, variance_error), 1.0)

    def ddim_exact_inverse(self) -> CheckResult:
        x0 = kernels.tag2bit(self.rng.integers(0, 16, size=12).tolist(), 16)
        e = self.rng.standard_normal(x0.shape)
        z = self.rng.standard_normal(x0.shape)
        x_T = kernels.forward_latent(x0, self.sched.T, e, self.sched)
        recovered = kernels.ddim_step(x_T, self.sched.T, 0, e, z, self.sched)
        return _result("ddim_exact_inverse", np.max(np.abs(recovered.values - x0.values)), 1e-9)

    def _oracle(self, x0: np.ndarray, calls: list[int]) -> Callable[[np.ndarray, int], np.ndarray]:
        def predict(x_t: np.ndarray, t: int) -> np.ndarray:
            calls[0] += 1
            a = self.sched.alpha_bar[t]
            return (x_t - math.sqrt(a) * x0) / math.sqrt(1.0 - a)

        return predict

    def oracle_denoise(self) -> CheckResult:
        """Planted signals, true noise, z = 0: bit errors plus wrong call counts."""
        expected_calls = math.ceil(self.sched.T / self.s)
        errors = 0
        for _ in range(DENOISE_INSTANCES):
            n = int(self.rng.integers(1, DENOISE_MAX_TOKENS + 1))
            count = 2 ** int(self.rng.integers(1, DENOISE_MAX_BITS + 1))
            ids = self.rng.integers(0, count, size=n).tolist()
            x0 = kernels.tag2bit(ids, count)
            x_T = kernels.forward_latent(x0, self.sched.T, self.rng.standard_normal(x0.shape), self.sched)
            calls = [0]
            x_hat = kernels.denoise_loop(
                self._oracle(x0.values, calls), self.sched, self.s, x0.shape, self.rng, x_T=x_T, stochastic=False
            )
            decoded = kernels.bit2tag(x_hat, count, fallback=0)
            errors += sum(a != b for a, b in zip(ids, decoded)) + abs(calls[0] - expected_calls)
        return _result("oracle_denoise", errors, 0)

    def mse(self) -> CheckResult:
        e = self.rng.standard_normal((7, 5))
        e_hat = self.rng.standard_normal((7, 5))
        total = 0.0
        for i in range(7):
            for j in range(5):
                total += (e[i, j] - e_hat[i, j]) ** 2
        return _result("mse", abs(kernels.mse_noise_loss(e, e_hat) - total / 35), 1e-12)

    def gumbel(self) -> CheckResult:
        probs = self.rng.dirichlet(np.ones(10), size=200)
        relaxed = kernels.gumbel_softmax(probs, self.tau, kernels.sample_gumbel(self.rng, probs.shape))
        row_error = float(np.max(np.abs(relaxed.sum(axis=1) - 1.0)))
        noiseless = kernels.gumbel_softmax(probs, self.tau, np.zeros(probs.shape))
        flips = int(np.sum(np.argmax(noiseless, axis=1) != np.argmax(probs, axis=1)))
        return _result("gumbel", row_error + flips, 1e-9)

    def disc_target(self) -> CheckResult:
        pred = self.rng.random((DISC_ROWS, 12))
        gold = self.rng.integers(0, 12, size=DISC_ROWS)
        target = kernels.disc_target(pred, gold)
        mismatches = 0
        for row, g, s in zip(pred, gold, target):
            best = 0
            for j in range(1, len(row)):
                if row[j] > row[best]:
                    best = j
            mismatches += int((best == g) != (s == 1.0))
        return _result("disc_target", mismatches, 0)

    def lambda_affine(self) -> CheckResult:
        n, count = 20, 6
        gold = self.rng.integers(0, count, size=n)
        onehot = kernels.onehot(gold.tolist(), count)
        batch = AdversarialBatch(
            pred=self.rng.dirichlet(np.ones(count), size=n),
            gold=gold,
            gold_relaxed=kernels.gumbel_softmax(onehot, self.tau, kernels.sample_gumbel(self.rng, onehot.shape)),
            d_real=self.rng.random(n),
            d_fake=self.rng.random(n),
            lam=0.0,
        )
        residual = 0.0
        for lam in (0.0, 1.0, 2.0):
            losses = kernels.adversarial_losses(batch.model_copy(update={"lam": lam}))
            residual = max(residual, abs(losses.l_g - (losses.l_tag + lam * losses.l_a)))
        return _result("lambda_affine", residual, 1e-12)

    def run(self) -> list[CheckResult]:
        checks = [
            self.schedule_monotone,
            self.alpha_bar_product,
            self.bit_roundtrip,
            self.bit_fallback,
            self.forward_monte_carlo,
            self.ddim_exact_inverse,
            self.oracle_denoise,
            self.mse,
            self.gumbel,
            self.disc_target,
            self.lambda_affine,
        ]
        results = []
        for check in checks:
            result = check()
            if not result.passed:
                logger.warning(f"{result.name}: residual {result.residual:.3g} above {result.tolerance:.3g}")
            results.append(result)
        return results


def run_selfcheck(config: RunConfig) -> list[CheckResult]:
    sched = kernels.build_schedule(config.T, config.beta_start, config.beta_end, config.schedule_kind)
    logger.info(f"kernel self-check: T={config.T}, s={config.s}, schedule={config.schedule_kind}, seed={config.seed}")
    return KernelSelfcheck(sched, config.s, config.seed, get_settings().gumbel_tau).run()
