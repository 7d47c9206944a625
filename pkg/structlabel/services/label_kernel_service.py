"""Numeric kernels for diffusion- and adversarial-style label decoding.

Labels are turned into analog bits (``tag2bit``: big-endian binary, 0 -> -1,
1 -> +1), noised by a Gaussian forward process and recovered with DDIM steps.
Networks only appear as callbacks (``predict(x_t, t) -> e_hat``); every
kernel here is deterministic given its noise arguments.
"""

import math
from collections.abc import Callable, Sequence

import numpy as np

from structlabel.config.logger_config import get_logger
from structlabel.models.kernel_models import AdversarialBatch, AdversarialLosses, BitSignal, NoiseSchedule
from structlabel.utils.exceptions import KernelDomainError, KernelShapeError

logger = get_logger("LabelKernels")

GUMBEL_EPS = 1e-10
BCE_CLAMP = 1e-12
COSINE_MAX_BETA = 0.999
COSINE_OFFSET = 0.008

SCHEDULE_KINDS = ("linear", "scaled_linear", "cosine")

Predictor = Callable[[np.ndarray, int], np.ndarray]


def _same_shape(a: np.ndarray, b: np.ndarray, what: str) -> None:
    if a.shape != b.shape:
        raise KernelShapeError(f"{what}: shapes {a.shape} and {b.shape} differ")


# ---------------------------------------------------------------------------
# Bit-tag conversion
# ---------------------------------------------------------------------------


def bit_width(label_count: int) -> int:
    """m = ceil(log2 |L|), at least one bit."""
    if label_count < 1:
        raise KernelDomainError(f"label count must be positive, got {label_count}")
    return max(1, math.ceil(math.log2(label_count)))


def tag2bit(labels: Sequence[int], label_count: int) -> BitSignal:
    m = bit_width(label_count)
    ids = np.asarray(labels, dtype=np.int64).reshape(-1)
    if ids.size and (ids.min() < 0 or ids.max() >= label_count):
        raise KernelDomainError(f"label ids must lie in [0, {label_count})")
    shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
    bits = (ids[:, None] >> shifts) & 1
    return BitSignal(values=bits.astype(np.float64) * 2.0 - 1.0)


def bit2tag(signal: BitSignal, label_count: int, fallback: int) -> list[int]:
    """Threshold at 0 and reassemble; codes outside the label set become ``fallback``."""
    if not 0 <= fallback < label_count:
        raise KernelDomainError(f"fallback id {fallback} outside [0, {label_count})")
    m = bit_width(label_count)
    if signal.m != m:
        raise KernelShapeError(f"expected {m} bits per label, got {signal.m}")
    bits = (signal.values > 0).astype(np.int64)
    ids = bits @ (1 << np.arange(m - 1, -1, -1, dtype=np.int64))
    ids = np.where(ids < label_count, ids, fallback)
    return [int(i) for i in ids]


# ---------------------------------------------------------------------------
# Noise schedule and forward process
# ---------------------------------------------------------------------------


def _cosine_betas(T: int) -> np.ndarray:
    def alpha_bar(x: float) -> float:
        return math.cos((x + COSINE_OFFSET) / (1 + COSINE_OFFSET) * math.pi / 2) ** 2

    return np.array([min(1 - alpha_bar((i + 1) / T) / alpha_bar(i / T), COSINE_MAX_BETA) for i in range(T)])


def build_schedule(T: int, beta_start: float, beta_end: float, kind: str = "linear") -> NoiseSchedule:
    if T < 1:
        raise KernelDomainError(f"T must be >= 1, got {T}")
    if kind == "linear":
        if not 0 < beta_start < beta_end < 1:
            raise KernelDomainError(f"need 0 < beta_start < beta_end < 1, got ({beta_start}, {beta_end})")
        beta = np.linspace(beta_start, beta_end, T) if T > 1 else np.array([beta_start])
    elif kind == "scaled_linear":
        if not 0 < beta_start < beta_end < 1:
            raise KernelDomainError(f"need 0 < beta_start < beta_end < 1, got ({beta_start}, {beta_end})")
        beta = np.linspace(beta_start**0.5, beta_end**0.5, T) ** 2 if T > 1 else np.array([beta_start])
    elif kind == "cosine":
        beta = _cosine_betas(T)
    else:
        raise KernelDomainError(f"unknown schedule kind {kind!r}; expected one of {', '.join(SCHEDULE_KINDS)}")

    if T > 1 and not np.all(np.diff(beta) > 0):
        raise KernelDomainError(f"{kind} schedule with T={T} is not strictly increasing")
    alpha = 1.0 - beta
    alpha_bar = np.concatenate(([1.0], np.cumprod(alpha)))
    logger.debug(f"{kind} schedule: T={T}, alpha_bar_T={alpha_bar[-1]:.6g}")
    return NoiseSchedule(T=T, kind=kind, beta=beta, alpha=alpha, alpha_bar=alpha_bar)


def _check_t(t: int, sched: NoiseSchedule, lowest: int = 0) -> None:
    if not lowest <= t <= sched.T:
        raise KernelDomainError(f"timestep {t} outside [{lowest}, {sched.T}]")


def forward_latent(x0: BitSignal, t: int, e: np.ndarray, sched: NoiseSchedule) -> BitSignal:
    """x_t = sqrt(alpha_bar_t) x0 + sqrt(1 - alpha_bar_t) e."""
    _check_t(t, sched)
    _same_shape(x0.values, e, "forward_latent")
    a = sched.alpha_bar[t]
    return BitSignal(values=math.sqrt(a) * x0.values + math.sqrt(1.0 - a) * e)


def forward_step(x_prev: BitSignal, t: int, e: np.ndarray, sched: NoiseSchedule) -> BitSignal:
    """One Markov step: x_t = sqrt(1 - beta_t) x_{t-1} + sqrt(beta_t) e."""
    _check_t(t, sched, lowest=1)
    _same_shape(x_prev.values, e, "forward_step")
    beta = sched.beta_at(t)
    return BitSignal(values=math.sqrt(1.0 - beta) * x_prev.values + math.sqrt(beta) * e)


def sample_timestep(rng: np.random.Generator, T: int) -> int:
    return int(rng.integers(1, T + 1))


# ---------------------------------------------------------------------------
# Denoising
# ---------------------------------------------------------------------------


def ddim_step(x_t: BitSignal, t: int, k: int, e_hat: np.ndarray, z: np.ndarray, sched: NoiseSchedule) -> BitSignal:
    if not 0 <= k < t <= sched.T:
        raise KernelDomainError(f"DDIM step needs 0 <= k < t <= T, got k={k}, t={t}, T={sched.T}")
    _same_shape(x_t.values, e_hat, "ddim_step noise estimate")
    _same_shape(x_t.values, z, "ddim_step z")
    a_t, a_k = sched.alpha_bar[t], sched.alpha_bar[k]
    x0_hat = x_t.values - math.sqrt(1.0 - a_t) * e_hat
    return BitSignal(values=math.sqrt(a_k) / math.sqrt(a_t) * x0_hat + math.sqrt(1.0 - a_k) * z)


def denoise_loop(
    predict: Predictor,
    sched: NoiseSchedule,
    s: int,
    shape: tuple[int, int],
    rng: np.random.Generator,
    x_T: BitSignal | None = None,
    stochastic: bool = True,
) -> BitSignal:
    """Run DDIM from t = T down to 0 in jumps of ``s``.

    ``x_T`` defaults to standard Gaussian noise; ``stochastic=False`` uses z = 0.
    """
    if s < 1:
        raise KernelDomainError(f"skip must be >= 1, got {s}")
    x = x_T if x_T is not None else BitSignal(values=rng.standard_normal(shape))
    if x.shape != tuple(shape):
        raise KernelShapeError(f"x_T has shape {x.shape}, expected {tuple(shape)}")
    t = sched.T
    while t > 0:
        e_hat = np.asarray(predict(x.values, t), dtype=np.float64)
        k = max(t - s, 0)
        z = rng.standard_normal(x.shape) if stochastic else np.zeros(x.shape)
        x = ddim_step(x, t, k, e_hat, z, sched)
        t = k
    return x


def mse_noise_loss(e: np.ndarray, e_hat: np.ndarray) -> float:
    _same_shape(np.asarray(e), np.asarray(e_hat), "mse_noise_loss")
    return float(np.mean((np.asarray(e) - np.asarray(e_hat)) ** 2))


def diffusion_training_loss(x0: BitSignal, predict: Predictor, sched: NoiseSchedule, rng: np.random.Generator) -> tuple[int, float]:
    """One evaluation of the noise-prediction objective at a random timestep."""
    t = sample_timestep(rng, sched.T)
    e = rng.standard_normal(x0.shape)
    x_t = forward_latent(x0, t, e, sched)
    e_hat = np.asarray(predict(x_t.values, t), dtype=np.float64)
    return t, mse_noise_loss(e, e_hat)


# ---------------------------------------------------------------------------
# Adversarial kernels
# ---------------------------------------------------------------------------


def onehot(labels: Sequence[int], label_count: int) -> np.ndarray:
    ids = np.asarray(labels, dtype=np.int64).reshape(-1)
    if ids.size and (ids.min() < 0 or ids.max() >= label_count):
        raise KernelDomainError(f"label ids must lie in [0, {label_count})")
    out = np.zeros((ids.size, label_count))
    out[np.arange(ids.size), ids] = 1.0
    return out


def sample_gumbel(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    u = rng.uniform(np.finfo(float).tiny, 1.0, size=shape)
    return -np.log(-np.log(u))


def gumbel_softmax(probs: np.ndarray, tau: float, gumbel_noise: np.ndarray) -> np.ndarray:
    """softmax((log(p + eps) + g) / tau) over the last axis."""
    if tau <= 0:
        raise KernelDomainError(f"temperature must be positive, got {tau}")
    probs = np.asarray(probs, dtype=np.float64)
    _same_shape(probs, np.asarray(gumbel_noise), "gumbel_softmax")
    logits = (np.log(probs + GUMBEL_EPS) + gumbel_noise) / tau
    logits -= logits.max(axis=-1, keepdims=True)
    weights = np.exp(logits)
    return weights / weights.sum(axis=-1, keepdims=True)


def disc_target(pred: np.ndarray, gold: Sequence[int]) -> np.ndarray:
    """1 where the row argmax (lowest index on ties) hits the gold id."""
    pred = np.asarray(pred)
    gold_ids = np.asarray(gold, dtype=np.int64)
    if pred.ndim != 2 or pred.shape[0] != gold_ids.shape[0]:
        raise KernelShapeError(f"pred {pred.shape} does not match {gold_ids.shape[0]} gold ids")
    return (np.argmax(pred, axis=1) == gold_ids).astype(np.float64)


def binary_cross_entropy(scores: np.ndarray, targets: np.ndarray) -> float:
    scores = np.asarray(scores, dtype=np.float64)
    if scores.size and (scores.min() < 0 or scores.max() > 1):
        raise KernelDomainError("discriminator scores must lie in [0, 1]")
    _same_shape(scores, np.asarray(targets), "binary_cross_entropy")
    if not scores.size:
        return 0.0
    p = np.clip(scores, BCE_CLAMP, 1.0 - BCE_CLAMP)
    return float(np.mean(-(targets * np.log(p) + (1.0 - targets) * np.log(1.0 - p))))


def categorical_cross_entropy(probs: np.ndarray, gold: Sequence[int]) -> float:
    probs = np.asarray(probs, dtype=np.float64)
    gold_ids = np.asarray(gold, dtype=np.int64)
    if not gold_ids.size:
        return 0.0
    picked = probs[np.arange(gold_ids.size), gold_ids]
    return float(np.mean(-np.log(np.clip(picked, BCE_CLAMP, 1.0))))


def adversarial_losses(batch: AdversarialBatch) -> AdversarialLosses:
    s = disc_target(batch.pred, batch.gold)
    ones = np.ones_like(batch.d_real)
    l_dp = binary_cross_entropy(batch.d_real, ones)
    l_dg = binary_cross_entropy(batch.d_fake, s)
    l_a = binary_cross_entropy(batch.d_fake, ones)
    l_tag = categorical_cross_entropy(batch.pred, batch.gold)
    return AdversarialLosses(
        l_g=l_tag + batch.lam * l_a,
        l_d=l_dp + l_dg,
        l_a=l_a,
        l_tag=l_tag,
        l_dp=l_dp,
        l_dg=l_dg,
    )
