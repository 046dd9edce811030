#include "rgn/ssfm.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rgn/constellation.hpp"
#include "rgn/sha256.hpp"
#include "rgn/units.hpp"

namespace rgn {

namespace {

std::mutex fftw_plan_mutex;

struct Fft {
  int n;
  fftw_plan fwd, bwd;
  std::vector<std::complex<double>> buf;

  explicit Fft(int n_) : n(n_), buf(static_cast<size_t>(n_)) {
    std::lock_guard<std::mutex> lk(fftw_plan_mutex);
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fwd = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft() {
    std::lock_guard<std::mutex> lk(fftw_plan_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  void forward(std::vector<std::complex<double>>& x) {
    buf = x;
    fftw_execute(fwd);
    x = buf;
  }
  // unnormalized inverse; caller divides by n
  void backward(std::vector<std::complex<double>>& x) {
    buf = x;
    fftw_execute(bwd);
    x = buf;
  }
};

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

std::complex<double> draw_symbol(std::mt19937_64& rng, const Constellation& c) {
  if (c.gaussian) {
    // Box-Muller on raw bits for cross-platform determinism
    double u1 = uniform01(rng), u2 = uniform01(rng);
    u1 = std::max(u1, 1e-300);
    const double r = std::sqrt(-std::log(u1));  // per-quadrature var 1/2
    return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
  }
  const size_t idx = static_cast<size_t>(rng() % c.points.size());
  return c.points[idx];
}

}  // namespace

SsfmResult simulate_link(const SsfmConfig& cfg, const FiberSpec& fiber, const ChannelPlan& plan,
                         const PowerProfile& profile, int n_spans) {
  plan.validate();
  const size_t n_ch = plan.channels.size();
  if (n_ch > 9) throw std::invalid_argument("simulate_link: desk-scale validator (<= 9 channels)");
  if (cfg.symbols_per_channel < (1 << 12) || cfg.symbols_per_channel > (1 << 16))
    throw std::invalid_argument("simulate_link: symbols_per_channel outside 2^12..2^16");
  const double B = plan.channels.front().bandwidth_thz;
  for (const auto& c : plan.channels)
    if (std::abs(c.bandwidth_thz - B) > 1e-12)
      throw std::invalid_argument("simulate_link: channels must share one symbol rate");

  const double f_lo = plan.channels.front().center_frequency_thz;
  const double f_hi = plan.channels.back().center_frequency_thz;
  const double f_c = 0.5 * (f_lo + f_hi);
  const double occupied = plan.occupied_bandwidth_thz();

  int sps = cfg.samples_per_symbol;
  if (sps <= 0) sps = std::max(2, static_cast<int>(std::ceil(occupied * cfg.oversampling_guard / B)));
  if (occupied * cfg.oversampling_guard > sps * B)
    throw std::invalid_argument("simulate_link: aliasing guard violated (raise samples_per_symbol)");
  const int n_sym = cfg.symbols_per_channel;
  const int N = n_sym * sps;
  const double df = B / n_sym;  // bin spacing

  // constellation and per-channel symbols
  const Constellation cons = make_constellation(plan.constellation_tag.empty()
                                                    ? std::string("gaussian")
                                                    : plan.constellation_tag);
  double cons_norm = 1.0;
  if (!cons.gaussian) {
    double m2 = 0.0;
    for (size_t i = 0; i < cons.points.size(); ++i)
      m2 += cons.probabilities[i] * std::norm(cons.points[i]);
    cons_norm = 1.0 / std::sqrt(m2);
  }

  std::mt19937_64 rng(cfg.seed);
  SsfmResult out;
  out.seed = cfg.seed;
  out.tx.resize(n_ch);

  std::vector<int> center_bin(n_ch);
  std::vector<std::complex<double>> field(static_cast<size_t>(N), 0.0);
  Fft fft(N);

  for (size_t c = 0; c < n_ch; ++c) {
    const double f_off = plan.channels[c].center_frequency_thz - f_c;
    center_bin[c] = static_cast<int>(std::llround(f_off / df));
    const double amp = std::sqrt(plan.channels[c].launch_power_mw);
    auto& tx = out.tx[c];
    tx.resize(static_cast<size_t>(n_sym));
    for (int k = 0; k < n_sym; ++k) tx[static_cast<size_t>(k)] = amp * cons_norm * draw_symbol(rng, cons);
  }

  // frequency-domain synthesis: channel spectrum = DFT of symbols placed on
  // the channel's bins, scaled so mean |A|^2 equals the launch power sum
  std::vector<std::complex<double>> spec(static_cast<size_t>(N), 0.0);
  {
    std::vector<std::complex<double>> s(static_cast<size_t>(n_sym));
    Fft cfft(n_sym);
    for (size_t c = 0; c < n_ch; ++c) {
      s = out.tx[c];
      cfft.forward(s);
      for (int kp = -n_sym / 2; kp < n_sym / 2; ++kp) {
        const int bin = ((center_bin[c] + kp) % N + N) % N;
        const int sidx = (kp % n_sym + n_sym) % n_sym;
        spec[static_cast<size_t>(bin)] += (static_cast<double>(N) / n_sym) * s[static_cast<size_t>(sidx)];
      }
    }
  }
  field = spec;
  fft.backward(field);
  for (auto& v : field) v /= static_cast<double>(N);

  // dispersion tables at the simulation center
  const Beta beta = fiber.beta();
  const double beta2_c =
      beta.beta2_ps2_km + 2.0 * kPi * beta.beta3_ps3_km * (f_c - fiber.reference_frequency_thz());
  const double beta3_c = beta.beta3_ps3_km;
  std::vector<double> omega(static_cast<size_t>(N));
  for (int m = 0; m < N; ++m) {
    const int mm = m < N / 2 ? m : m - N;
    omega[static_cast<size_t>(m)] = 2.0 * kPi * mm * df;
  }
  auto disp_phase = [&](double w, double h) {
    return (0.5 * beta2_c * w * w + beta3_c * w * w * w / 6.0) * h;
  };

  const double L = fiber.span_length_km;
  const bool propagate = L > 0.0 && n_spans > 0;
  int n_steps = 0;

  if (propagate) {
    // per-bin frequency -> bounding channels for the gain interpolation
    std::vector<int> lo_ch(static_cast<size_t>(N)), hi_ch(static_cast<size_t>(N));
    std::vector<double> frac(static_cast<size_t>(N));
    for (int m = 0; m < N; ++m) {
      const int mm = m < N / 2 ? m : m - N;
      const double f = f_c + mm * df;
      size_t lo = 0;
      while (lo + 1 < n_ch && plan.channels[lo + 1].center_frequency_thz <= f) ++lo;
      size_t hi = std::min(lo + 1, n_ch - 1);
      double t = 0.0;
      if (hi != lo) {
        const double f0 = plan.channels[lo].center_frequency_thz;
        const double f1 = plan.channels[hi].center_frequency_thz;
        t = std::clamp((f - f0) / (f1 - f0), 0.0, 1.0);
      }
      if (f <= plan.channels.front().center_frequency_thz) { lo = hi = 0; t = 0.0; }
      if (f >= plan.channels.back().center_frequency_thz) { lo = hi = n_ch - 1; t = 0.0; }
      lo_ch[static_cast<size_t>(m)] = static_cast<int>(lo);
      hi_ch[static_cast<size_t>(m)] = static_cast<int>(hi);
      frac[static_cast<size_t>(m)] = t;
    }

    // step count from the nonlinear-phase cap on the peak total power
    double p_tot_max = 0.0;
    for (size_t g = 0; g < profile.z_km.size(); ++g) {
      double p = 0.0;
      for (size_t c = 0; c < n_ch; ++c) p += profile.power_mw[c][g];
      p_tot_max = std::max(p_tot_max, p);
    }
    const double gamma = fiber.gamma_per_mw_km();
    double h_cap = cfg.max_step_km;
    if (gamma > 0.0 && p_tot_max > 0.0)
      h_cap = std::min(h_cap, cfg.max_nonlinear_phase_rad / (gamma * p_tot_max));
    n_steps = std::max(4, static_cast<int>(std::ceil(L / h_cap)));
    const double h = L / n_steps;

    // per-channel sqrt(rho) at step boundaries
    std::vector<std::vector<double>> amp_ch(static_cast<size_t>(n_steps + 1),
                                            std::vector<double>(n_ch));
    for (int st = 0; st <= n_steps; ++st) {
      const double z = st * h;
      for (size_t c = 0; c < n_ch; ++c) {
        double pw, rho;
        profile.sample(plan.channels[c].center_frequency_thz, z, pw, rho);
        amp_ch[static_cast<size_t>(st)][c] = std::sqrt(std::max(rho, 1e-30));
      }
    }

    std::vector<std::complex<double>> lin_half(static_cast<size_t>(N));
    for (int span = 0; span < n_spans; ++span) {
      for (int st = 0; st < n_steps; ++st) {
        // first linear half-step with the first half of the gain ratio
        fft.forward(field);
        const auto& a0 = amp_ch[static_cast<size_t>(st)];
        const auto& a1 = amp_ch[static_cast<size_t>(st + 1)];
        for (int m = 0; m < N; ++m) {
          const size_t mi = static_cast<size_t>(m);
          const double g0 = a0[static_cast<size_t>(lo_ch[mi])] +
                            frac[mi] * (a0[static_cast<size_t>(hi_ch[mi])] -
                                        a0[static_cast<size_t>(lo_ch[mi])]);
          const double g1 = a1[static_cast<size_t>(lo_ch[mi])] +
                            frac[mi] * (a1[static_cast<size_t>(hi_ch[mi])] -
                                        a1[static_cast<size_t>(lo_ch[mi])]);
          const double gain_half = std::sqrt(std::max(g1 / g0, 0.0));
          const double th = disp_phase(omega[mi], 0.5 * h);
          field[mi] *= gain_half * std::exp(std::complex<double>(0.0, th));
        }
        fft.backward(field);
        for (auto& v : field) v /= static_cast<double>(N);
        const double gamma_h = fiber.gamma_per_mw_km() * h;
        for (auto& v : field) v *= std::exp(std::complex<double>(0.0, gamma_h * std::norm(v)));
        fft.forward(field);
        for (int m = 0; m < N; ++m) {
          const size_t mi = static_cast<size_t>(m);
          const double g0 = a0[static_cast<size_t>(lo_ch[mi])] +
                            frac[mi] * (a0[static_cast<size_t>(hi_ch[mi])] -
                                        a0[static_cast<size_t>(lo_ch[mi])]);
          const double g1 = a1[static_cast<size_t>(lo_ch[mi])] +
                            frac[mi] * (a1[static_cast<size_t>(hi_ch[mi])] -
                                        a1[static_cast<size_t>(lo_ch[mi])]);
          const double gain_half = std::sqrt(std::max(g1 / g0, 0.0));
          const double th = disp_phase(omega[mi], 0.5 * h);
          field[mi] *= gain_half * std::exp(std::complex<double>(0.0, th));
        }
        fft.backward(field);
        for (auto& v : field) v /= static_cast<double>(N);
      }
      // ideal lumped amplification + gain flattening: restore launch per bin
      fft.forward(field);
      const auto& aL = amp_ch[static_cast<size_t>(n_steps)];
      for (int m = 0; m < N; ++m) {
        const size_t mi = static_cast<size_t>(m);
        const double g = aL[static_cast<size_t>(lo_ch[mi])] +
                         frac[mi] * (aL[static_cast<size_t>(hi_ch[mi])] -
                                     aL[static_cast<size_t>(lo_ch[mi])]);
        field[mi] /= std::max(g, 1e-15);
      }
      fft.backward(field);
      for (auto& v : field) v /= static_cast<double>(N);
    }
  }
  out.n_steps_per_span = n_steps;

  // receiver: exact CD compensation, brick-wall matched filter, decimation
  fft.forward(field);
  if (propagate) {
    const double total_L = L * n_spans;
    for (int m = 0; m < N; ++m) {
      const size_t mi = static_cast<size_t>(m);
      const double th = disp_phase(omega[mi], total_L);
      field[mi] *= std::exp(std::complex<double>(0.0, -th));
    }
  }
  out.rx.resize(n_ch);
  {
    Fft cfft(n_sym);
    for (size_t c = 0; c < n_ch; ++c) {
      std::vector<std::complex<double>> s(static_cast<size_t>(n_sym), 0.0);
      for (int kp = -n_sym / 2; kp < n_sym / 2; ++kp) {
        const int bin = ((center_bin[c] + kp) % N + N) % N;
        const int sidx = (kp % n_sym + n_sym) % n_sym;
        s[static_cast<size_t>(sidx)] = field[static_cast<size_t>(bin)] * (static_cast<double>(n_sym) / N);
      }
      cfft.backward(s);
      for (auto& v : s) v /= static_cast<double>(n_sym);
      out.rx[c] = std::move(s);
    }
  }

  std::ostringstream dig;
  dig << "ssfm n_sym=" << n_sym << " sps=" << sps << " seed=" << cfg.seed
      << " spans=" << n_spans << " steps=" << n_steps << " ch=" << n_ch;
  out.config_digest = sha256_hex(dig.str());
  return out;
}

double measure_snr_nli_db(const std::vector<std::complex<double>>& tx,
                          const std::vector<std::complex<double>>& rx, double ceiling_db) {
  if (tx.size() != rx.size() || tx.empty())
    throw std::invalid_argument("measure_snr_nli_db: sequence length mismatch");
  std::complex<double> xy = 0.0;
  double xx = 0.0;
  for (size_t i = 0; i < tx.size(); ++i) {
    xy += rx[i] * std::conj(tx[i]);
    xx += std::norm(tx[i]);
  }
  if (xx <= 0.0) throw std::invalid_argument("measure_snr_nli_db: zero transmit power");
  const std::complex<double> a = xy / xx;
  if (std::abs(a) == 0.0) return -ceiling_db;
  double err = 0.0;
  for (size_t i = 0; i < tx.size(); ++i) err += std::norm(rx[i] / a - tx[i]);
  if (err <= 0.0) return ceiling_db;
  const double snr = xx / err;
  return std::min(db_from_linear(snr), ceiling_db);
}

}  // namespace rgn
