"""Turn spectra and counting laws into Report objects."""

import math

import numpy as np

from spectra.counting import gaussian_approximation, log_concavity_check
from spectra.fredholm import ZERO_FLOOR, xi_zeros

from .writers import SUM_DIGITS, Report, json_number, metadata, sig


def _region(spectrum):
    if spectrum is None:
        return None
    a, b = spectrum.region
    return {"a": json_number(float(a)), "b": json_number(float(b))}


def run_payload(command, kernel, spectrum, dist, lclt, config, extra=None):
    """The per-run JSON object shared by eigs and count."""
    lambdas = [] if spectrum is None else [sig(v, SUM_DIGITS) for v in spectrum.lambdas]
    log_concave = bool(log_concavity_check(dist, config.log_concavity_floor))
    payload = {
        "command": command,
        "kernel": kernel,
        "region": _region(spectrum),
        "order": spectrum.quad_order if spectrum is not None and spectrum.quad_order else None,
        "lambdas": lambdas,
        "mu": sig(dist.mu, SUM_DIGITS),
        "sigma2": sig(dist.sigma2, SUM_DIGITS),
        "E": [sig(v) for v in dist.probabilities],
        "lclt_sup": None if lclt is None else sig(lclt.lclt_sup),
        "clt_sup": None if lclt is None else sig(lclt.clt_sup),
        "log_concave": log_concave,
        "metadata": metadata(
            truncation=config.truncation,
            clamped=0 if spectrum is None else spectrum.clamped,
            order=config.order,
        ),
    }
    if extra:
        payload.update(extra)
    return payload


def spectrum_report(spectrum, dist, lclt, config):
    """One row per eigenvalue: l, lambda, mu_l = lambda/(1-lambda), zero -1/mu_l."""
    zeros = list(xi_zeros(spectrum))
    rows = []
    for index, lam in enumerate(spectrum.lambdas):
        mu_l = lam / (1.0 - lam) if lam < 1.0 else math.inf
        zero = sig(zeros[index], SUM_DIGITS) if lam > ZERO_FLOOR else None
        rows.append([index, sig(lam, SUM_DIGITS), sig(mu_l, SUM_DIGITS), zero])
    payload = run_payload(
        "eigs", spectrum.kernel_name, spectrum, dist, lclt, config,
        extra={
            "mu_l": [json_number(row[2]) for row in rows],
            "zeros": [row[3] for row in rows],
        },
    )
    summary = [f"trace {sig(float(np.sum(spectrum.lambdas)), SUM_DIGITS)!r} over {len(rows)} eigenvalues"]
    return Report(header=["l", "lambda", "mu_l", "zero"], rows=rows, payload=payload, summary=summary)


def count_report(name, spectrum, dist, lclt, config, extra=None):
    """Rows k, E(k), Gaussian approximation, difference."""
    ks = [config.k] if config.k is not None else list(range(len(dist)))
    if lclt is not None:
        gauss = gaussian_approximation(dist, ks)
    else:
        gauss = [None] * len(ks)
    rows = []
    for k, g in zip(ks, gauss):
        e = dist[k]
        if g is None:
            rows.append([k, sig(e), None, None])
        else:
            rows.append([k, sig(e), sig(g), sig(e - g)])
    payload = run_payload("count", name, spectrum, dist, lclt, config, extra=extra)
    summary = [
        f"mu={payload['mu']!r} sigma2={payload['sigma2']!r} "
        f"lclt_sup={payload['lclt_sup']!r} clt_sup={payload['clt_sup']!r} "
        f"log_concave={payload['log_concave']}"
    ]
    return Report(header=["k", "E", "gaussian", "difference"], rows=rows, payload=payload, summary=summary)
