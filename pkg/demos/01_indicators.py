"""Building financial-cycle indicators from raw quarterly series.

Walks through the core series toolkit: calendar-anchored quarterly series,
stationarity transforms, backward splicing with a proxy's growth rate, and
the cyclically-adjusted price-to-rent valuation ratio.
"""

import numpy as np

from cyclecast import (
    Quarter,
    Series,
    apply_transform,
    capr,
    cumulative_log_growth,
    splice_backward,
)

rng = np.random.default_rng(2024)

# --- a synthetic house-price level and a rent index -------------------------
start = Quarter(1955, 1)
n = 200
price_growth = rng.normal(0.012, 0.02, n)
hpi = Series(start, 80.0 * np.exp(np.cumsum(price_growth)))
rent_growth = rng.normal(0.008, 0.006, n)
rent = Series(start, 4.0 * np.exp(np.cumsum(rent_growth)))

print(f"house price index: {hpi.start}..{hpi.end} ({len(hpi)} quarters)")
print(f"imputed rent:      {rent.start}..{rent.end}")

# --- splice a short series backward with a proxy ----------------------------
# Suppose the rent series only starts in 1970Q1 but an older index tracks its
# quarterly growth. The splice chains the proxy's growth rate backward.
short_rent = Series(Quarter(1970, 1), rent.window(Quarter(1970, 1), rent.end))
proxy = Series(start, rent.values * rng.uniform(0.9, 1.1))  # rescaled twin
extended = splice_backward(short_rent, proxy)
print(f"\nshort rent started {short_rent.start}; spliced back to {extended.start}")
print(f"values on the original support are untouched: "
      f"{extended.at(Quarter(1971, 3)) == short_rent.at(Quarter(1971, 3))}")

# --- the valuation ratio -----------------------------------------------------
# Price divided by the mean of the preceding 40 quarters of rents. Quarters
# without a full rent window come out missing rather than raising.
ratio = capr(hpi, rent, window=40)
first = ratio.first_valid()
print(f"\nvaluation ratio defined from {first} "
      f"(needs 40 prior rent quarters)")
log_ratio = apply_transform(ratio.trim(), "log", label="capr")
print(f"log ratio at {first}: {log_ratio.at(first):.4f}")

# Rescaling both series by any common factor leaves the ratio unchanged.
scaled = capr(Series(hpi.start, 1.7 * hpi.values),
              Series(rent.start, 1.7 * rent.values), window=40)
print(f"scale invariance: max abs diff = "
      f"{np.nanmax(np.abs(scaled.values - ratio.values)):.2e}")

# --- growth targets ----------------------------------------------------------
# Multi-year cumulative log growth is the forecast target downstream.
gdp = Series(start, 3000.0 * np.exp(np.cumsum(rng.normal(0.007, 0.009, n))))
for h in (4, 12, 20):
    g = cumulative_log_growth(gdp, h)
    q = gdp.end
    print(f"cumulative log growth over {h:>2} quarters ending {q}: {g.at(q):+.4f}")
