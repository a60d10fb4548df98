#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

#include "bethe/engine.hpp"
#include "formulas.hpp"
#include "quad_complex.hpp"

namespace bethe {

namespace {

using detail::QComplex;

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr size_t kCellCap = size_t{1} << 23;

int pow2_ceil(int v) {
  int m = 8;
  while (m < v) m <<= 1;
  return m;
}

// In-place radix-2 transform with sign +1 twiddles (tw[j] = e^{+2 pi i j/n}).
void fft_line(QComplex* a, int n, int tw_stride, const QComplex* tw) {
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const int step = n / len * tw_stride;
    for (int i = 0; i < n; i += len) {
      for (int j = 0; j < len / 2; ++j) {
        const QComplex& w = tw[static_cast<size_t>(j) * step];
        QComplex u = a[i + j];
        QComplex v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
      }
    }
  }
}

void parallel_chunks(size_t count, int threads, const std::function<void(size_t, size_t)>& body) {
  int workers = threads > 0 ? threads
                            : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, 8));
  if (workers == 1 || count < 2) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  const size_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const size_t b = std::min(count, static_cast<size_t>(w) * chunk);
    const size_t e = std::min(count, b + chunk);
    if (b < e) pool.emplace_back([&, b, e] { body(b, e); });
  }
  for (auto& th : pool) th.join();
}

// Transform every axis of the row-major tensor (last axis fastest).
void fft_axes(std::vector<QComplex>& tensor, int n_axes, int m,
              const std::vector<QComplex>& tw, int threads) {
  for (int axis = 0; axis < n_axes; ++axis) {
    size_t stride = 1;
    for (int a = axis + 1; a < n_axes; ++a) stride *= m;
    const size_t lines = tensor.size() / m;
    parallel_chunks(lines, threads, [&](size_t b, size_t e) {
      std::vector<QComplex> scratch(m);
      for (size_t l = b; l < e; ++l) {
        const size_t outer = l / stride;
        const size_t inner = l % stride;
        const size_t base = outer * stride * m + inner;
        if (stride == 1) {
          fft_line(&tensor[base], m, 1, tw.data());
        } else {
          for (int k = 0; k < m; ++k) scratch[k] = tensor[base + k * stride];
          fft_line(scratch.data(), m, 1, tw.data());
          for (int k = 0; k < m; ++k) tensor[base + k * stride] = scratch[k];
        }
      }
    });
  }
}

// Smallest guard band g with (w t)^g e^t / g! below 1e-13; bounds the
// exponential-series mass aliased across the node cutoff.
int exp_guard(double wt, double t) {
  double term = std::exp(t);
  int g = 0;
  while (term > 1e-13 && g < 400) {
    ++g;
    term *= wt / g;
  }
  return g + 1;
}

void enumerate_window(ModelKind kind, int n, int lo, int hi,
                      std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  const bool weak = kind == ModelKind::Azrp;
  int start = lo;
  if (!cur.empty()) start = weak ? cur.back() : cur.back() + 1;
  for (int v = std::max(start, lo); v <= hi; ++v) {
    cur.push_back(v);
    enumerate_window(kind, n, lo, hi, cur, out);
    cur.pop_back();
  }
}

}  // namespace

Distribution transition_distribution(const ModelParams& params,
                                     const Configuration& y, double t, int lo,
                                     int hi, int nodes,
                                     const EvalOptions& opts) {
  if (!y.physical()) {
    throw std::invalid_argument("initial configuration must be physical");
  }
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  if (lo > hi) throw std::invalid_argument("window is empty");
  const int n = y.n();
  const int width = hi - lo + 1;
  long long maxe = 1;
  for (int yv : y.x) {
    maxe = std::max({maxe, std::llabs(static_cast<long long>(hi) - yv - 1),
                     std::llabs(static_cast<long long>(lo) - yv - 1)});
  }
  const ScatteringSpec sc = ScatteringSpec::for_model(params);
  const std::vector<double> radii = contour_radii(sc, n, RadiusMode::Small);
  const double r_min = *std::min_element(radii.begin(), radii.end());
  const double r_max = *std::max_element(radii.begin(), radii.end());

  int m = nodes;
  if (m == 0) {
    const double wt =
        t * std::max({params.p, params.q, params.p / r_min, params.q * r_max});
    // Guard band: both the exponential-series tail and the scattering
    // poles' geometric tail must have decayed below ~1e-12 at the cutoff.
    const double ratio = pole_distance_ratio(sc, radii);
    const int pole_guard =
        static_cast<int>(std::ceil(std::log(1e-12) / std::log(ratio)));
    const int guard = std::max(exp_guard(wt, t), pole_guard);
    m = pow2_ceil(std::max({32, width + 2, static_cast<int>(maxe) + guard}));
  }
  if (m < width) {
    throw std::invalid_argument("node count below window width");
  }
  size_t cells = 1;
  for (int i = 0; i < n; ++i) {
    cells *= m;
    if (cells > kCellCap) {
      throw ResourceError("distribution grid too large; narrow the window");
    }
  }

  // Shared per-node data (nodes per variable; radii differ for PushASEP).
  std::vector<std::vector<QComplex>> node(n, std::vector<QComplex>(m));
  std::vector<std::vector<QComplex>> common(n, std::vector<QComplex>(m));
  std::vector<QComplex> tw(m / 2 > 0 ? m / 2 : 1);
  for (int v = 0; v < n; ++v) {
    const __float128 rq = radii[v];
    for (int k = 0; k < m; ++k) {
      const __float128 ang = 2 * M_PIq * k / m;
      node[v][k] = detail::qpolar(rq, ang);
      const QComplex eps = detail::energy_value(params.p, params.q, node[v][k]);
      common[v][k] = detail::qexp(static_cast<__float128>(t) * eps) *
                     (__float128{1} / m);
    }
  }
  for (int j = 0; j < m / 2; ++j) {
    tw[j] = detail::qpolar(1, 2 * M_PIq * j / m);
  }
  // Scattering tables for variable pairs alpha < beta.
  std::vector<std::vector<QComplex>> stab(static_cast<size_t>(n) * n);
  for (int a = 0; a + 1 < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      auto& table = stab[static_cast<size_t>(a) * n + b];
      table.resize(static_cast<size_t>(m) * m);
      for (int ka = 0; ka < m; ++ka) {
        for (int kb = 0; kb < m; ++kb) {
          table[static_cast<size_t>(ka) * m + kb] =
              detail::s_value(sc, node[a][ka], node[b][kb]);
        }
      }
    }
  }
  // Unit phases omega_k^{-y_v}.
  std::vector<std::vector<QComplex>> yphase(n, std::vector<QComplex>(m));
  for (int v = 0; v < n; ++v) {
    for (int k = 0; k < m; ++k) {
      long long a = (-static_cast<long long>(k) * y.x[v]) % m;
      if (a < 0) a += m;
      yphase[v][k] = detail::qpolar(1, 2 * M_PIq * a / m);
    }
  }

  std::vector<std::vector<int>> configs;
  {
    std::vector<int> cur;
    enumerate_window(params.kind, n, lo, hi, cur, configs);
  }
  std::vector<QComplex> acc(configs.size());

  const auto terms = permutations_with_inversions(n);
  std::vector<QComplex> tensor(cells);
  std::vector<QComplex> fac(static_cast<size_t>(n) * m);

  std::vector<__float128> logr(n);
  for (int v = 0; v < n; ++v) logr[v] = logq(static_cast<__float128>(radii[v]));

  for (const auto& term : terms) {
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[term.sigma[i] - 1] = i;
    for (int v = 0; v < n; ++v) {
      for (int k = 0; k < m; ++k) {
        fac[static_cast<size_t>(v) * m + k] = yphase[v][k] * common[v][k];
      }
    }
    std::vector<std::vector<int>> partners(n);
    for (const auto& [beta, alpha] : term.inversions) {
      partners[beta - 1].push_back(alpha - 1);
    }
    // Fill the tensor with the integrand (sans the r^{x-y} magnitudes that
    // are applied at lookup): prefix products down the variable nest.
    std::vector<int> kidx(n, 0);
    auto fill = [&](auto&& self, int v, size_t off, QComplex prefix) -> void {
      const QComplex* f = &fac[static_cast<size_t>(v) * m];
      if (v == n - 1) {
        QComplex* row = &tensor[off * m];
        for (int k = 0; k < m; ++k) {
          QComplex val = prefix * f[k];
          for (int a : partners[v]) {
            val = val * stab[static_cast<size_t>(a) * n + v]
                        [static_cast<size_t>(kidx[a]) * m + k];
          }
          row[k] = val;
        }
        return;
      }
      for (int k = 0; k < m; ++k) {
        QComplex p = prefix * f[k];
        for (int a : partners[v]) {
          p = p * stab[static_cast<size_t>(a) * n + v]
                      [static_cast<size_t>(kidx[a]) * m + k];
        }
        kidx[v] = k;
        self(self, v + 1, off * m + k, p);
      }
    };
    fill(fill, 0, 0, QComplex{1});
    fft_axes(tensor, n, m, tw, opts.threads);

    parallel_chunks(configs.size(), opts.threads, [&](size_t b, size_t e) {
      for (size_t ci = b; ci < e; ++ci) {
        const auto& xs = configs[ci];
        size_t idx = 0;
        __float128 logscale = 0;
        for (int v = 0; v < n; ++v) {
          const int xv = xs[pos[v]];
          int f = xv % m;
          if (f < 0) f += m;
          idx = idx * m + f;
          logscale += static_cast<__float128>(xv - y.x[v]) * logr[v];
        }
        acc[ci] += expq(logscale) * tensor[idx];
      }
    });
  }

  Distribution dist;
  __float128 mass = 0;
  for (size_t ci = 0; ci < configs.size(); ++ci) {
    mass += acc[ci].re;
    dist.entries.emplace(Configuration(params.kind, configs[ci]),
                         static_cast<double>(acc[ci].re));
  }
  dist.captured_mass = static_cast<double>(mass);
  return dist;
}

}  // namespace bethe
