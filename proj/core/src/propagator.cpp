#include "sbs/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "sbs/analytics.hpp"
#include "sbs/errors.hpp"

namespace sbs::prop {

using cplx = std::complex<double>;

double PulseSpec::amplitude(double t, double v_g) const {
    if (sigma_t <= 0.0 || photon_number <= 0.0) return 0.0;
    const double x = t - t_center;
    switch (shape) {
    case PulseShape::gaussian: {
        const double peak =
            std::sqrt(photon_number / (v_g * sigma_t * std::sqrt(2.0 * std::numbers::pi)));
        return peak * std::exp(-x * x / (4.0 * sigma_t * sigma_t));
    }
    case PulseShape::rectangular:
        return std::abs(x) < 0.5 * sigma_t
                   ? std::sqrt(photon_number / (v_g * sigma_t))
                   : 0.0;
    }
    return 0.0;
}

Grid Grid::make(const WaveguideParams& p, int nz, double duration) {
    if (nz < 1) throw ConfigError("grid nz must be >= 1");
    if (duration <= 0.0) throw ConfigError("grid duration must be positive");
    Grid g;
    g.nz = nz;
    g.dz = p.length / nz;
    g.dt = g.dz / p.v_g; // Courant number exactly 1
    g.nt = static_cast<std::int64_t>(std::ceil(duration / g.dt));
    return g;
}

namespace {

// One trajectory of the characteristics-aligned integrator. psi has nz+1
// samples (index 0 is the z = 0 boundary), phonons live on cells 1..nz.
class Engine {
public:
    Engine(const WaveguideParams& p, const DualPumpConfig& d, const Grid& grid, Mode mode)
        : p_(p), grid_(grid), mode_(mode),
          psi_(grid.nz + 1), q_u_(grid.nz + 1), q_l_(grid.nz + 1) {
        c_u_ = cplx(0.0, -1.0) * p.g * std::sqrt(d.upper.intensity);
        c_l_ = cplx(0.0, -1.0) * p.g * std::sqrt(d.lower.intensity);
        dw_u_ = 0.5 * p.gamma * d.upper.detuning_scaled;
        dw_l_ = 0.5 * p.gamma * d.lower.detuning_scaled;
        decay_ = std::exp(-0.5 * p.gamma * grid.dt);
        rise_ = (1.0 - decay_) / (0.5 * p.gamma);
        const auto r = analytics::dual_response(p, d);
        adiabatic_factor_ =
            1.0 + grid.dz * cplx(r.gain_per_length, -r.kappa);
        has_upper_ = d.upper.intensity > 0.0 && p.g > 0.0;
        has_lower_ = d.lower.intensity > 0.0 && p.g > 0.0;
    }

    // Advance from t to t + dt; `input` is the boundary sample at t + dt.
    // When rng is given, phonon channels receive circular Gaussian
    // increments with the stated total variances (per cell, per step).
    void step(double t, cplx input, std::mt19937_64* rng,
              double var_upper, double var_lower) {
        const int nz = grid_.nz;
        for (int i = nz; i >= 1; --i) psi_[i] = psi_[i - 1];
        psi_[0] = input;

        if (mode_ == Mode::adiabatic) {
            for (int i = 1; i <= nz; ++i) psi_[i] *= adiabatic_factor_;
            return;
        }

        const double t_mid = t + 0.5 * grid_.dt;
        const cplx phase_u = rotation(-dw_u_, t_mid);
        const cplx phase_l = rotation(+dw_l_, t_mid);
        const cplx drive_u = c_u_ * phase_u;        // multiplies conj(q_u), conj(psi)
        const cplx drive_l_psi = c_l_ * phase_l;    // multiplies q_l
        const cplx drive_l_q = c_l_ * std::conj(phase_l);
        const double dt = grid_.dt;

        if (has_upper_ && has_lower_) {
            for (int i = 1; i <= nz; ++i) {
                const cplx psi_new = psi_[i] + dt * (drive_u * std::conj(q_u_[i]) +
                                                     drive_l_psi * q_l_[i]);
                q_u_[i] = q_u_[i] * decay_ + drive_u * std::conj(psi_new) * rise_;
                q_l_[i] = q_l_[i] * decay_ + drive_l_q * psi_new * rise_;
                psi_[i] = psi_new;
            }
        } else if (has_upper_) {
            for (int i = 1; i <= nz; ++i) {
                const cplx psi_new = psi_[i] + dt * drive_u * std::conj(q_u_[i]);
                q_u_[i] = q_u_[i] * decay_ + drive_u * std::conj(psi_new) * rise_;
                psi_[i] = psi_new;
            }
        } else if (has_lower_) {
            for (int i = 1; i <= nz; ++i) {
                const cplx psi_new = psi_[i] + dt * drive_l_psi * q_l_[i];
                q_l_[i] = q_l_[i] * decay_ + drive_l_q * psi_new * rise_;
                psi_[i] = psi_new;
            }
        }

        if (rng) {
            if (has_upper_ && var_upper > 0.0) kick(q_u_, *rng, var_upper);
            if (has_lower_ && var_lower > 0.0) kick(q_l_, *rng, var_lower);
        }
    }

    const std::vector<cplx>& psi() const { return psi_; }
    cplx output() const { return psi_[grid_.nz]; }

private:
    static cplx rotation(double omega, double t) {
        if (omega == 0.0) return {1.0, 0.0};
        // Reduce t modulo the rotation period to bound phase rounding in
        // long runs.
        const double period = 2.0 * std::numbers::pi / std::abs(omega);
        const double tr = std::remainder(t, period);
        return std::polar(1.0, omega * tr);
    }

    void kick(std::vector<cplx>& q, std::mt19937_64& rng, double variance) {
        std::normal_distribution<double> n(0.0, std::sqrt(0.5 * variance));
        for (int i = 1; i <= grid_.nz; ++i)
            q[i] += cplx(n(rng), n(rng));
    }

    const WaveguideParams& p_;
    Grid grid_;
    Mode mode_;
    std::vector<cplx> psi_, q_u_, q_l_;
    cplx c_u_, c_l_;
    double dw_u_ = 0.0, dw_l_ = 0.0;
    double decay_ = 0.0, rise_ = 0.0;
    cplx adiabatic_factor_{1.0, 0.0};
    bool has_upper_ = false, has_lower_ = false;
};

double centroid(const std::vector<double>& density, double dt) {
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < density.size(); ++k) {
        num += static_cast<double>(k) * density[k];
        den += density[k];
    }
    if (!(den > 0.0) || !std::isfinite(den))
        throw NumericalError("centroid undefined: zero-energy output");
    return dt * num / den;
}

} // namespace

SimResult propagate_mean_field(const WaveguideParams& p, const DualPumpConfig& d,
                               const PulseSpec& pulse, const Grid& grid, Mode mode,
                               const PropagateOptions& opts) {
    Engine engine(p, d, grid, mode);
    SimResult res;
    res.grid = grid;
    res.mode = mode;
    res.output_density.reserve(grid.nt);
    res.output_field.reserve(grid.nt);
    res.input_density.reserve(grid.nt);
    std::int64_t map_stride = 0;
    if (opts.record_density_map) {
        res.density_map.emplace();
        map_stride = std::max<std::int64_t>(1, grid.nt / opts.density_map_rows);
    }

    double e_in = 0.0, e_out = 0.0;
    for (std::int64_t k = 0; k < grid.nt; ++k) {
        const double t = k * grid.dt;
        const cplx input = cplx(pulse.amplitude(t + grid.dt, p.v_g), 0.0);
        engine.step(t, input, nullptr, 0.0, 0.0);
        const cplx out = engine.output();
        const double in_rho = std::norm(engine.psi()[0]);
        const double out_rho = std::norm(out);
        res.input_density.push_back(in_rho);
        res.output_density.push_back(out_rho);
        res.output_field.push_back(out);
        e_in += in_rho;
        e_out += out_rho;
        if (opts.record_density_map && (k % map_stride == 0)) {
            for (int i = 1; i <= grid.nz; ++i)
                res.density_map->push_back(std::norm(engine.psi()[i]));
        }
        if ((k & 0x3ff) == 0 && !std::isfinite(out_rho))
            throw NumericalError("non-finite field detected (instability)");
    }
    if (!std::isfinite(e_out))
        throw NumericalError("non-finite field detected (instability)");
    if (e_in > 0.0 && e_out > 0.0)
        res.measured_gain = std::log(e_out / e_in) / (2.0 * p.length);
    return res;
}

DelayMeasurement measure_group_delay(const SimResult& result, const SimResult& reference,
                                     const WaveguideParams& p) {
    if (result.grid.nz != reference.grid.nz || result.grid.nt != reference.grid.nt)
        throw ConfigError("delay measurement requires matching grids");
    DelayMeasurement m;
    m.delay = centroid(result.output_density, result.grid.dt) -
              centroid(reference.output_density, reference.grid.dt);
    m.velocity_ratio = 1.0 / (1.0 + p.v_g * m.delay / p.length);
    return m;
}

double thermal_quadrature_at(const WaveguideParams& p, const DualPumpConfig& d,
                             double z, double t_obs, int nz_quad, int nt_quad) {
    if (t_obs <= 0.0 || z <= 0.0) return 0.0;
    const double g2 = p.g * p.g;
    const double w_upper =
        p.gamma * (p.n_bar + 1.0) * g2 * d.upper.intensity / (p.v_g * p.v_g);
    const double w_lower =
        p.gamma * p.n_bar * g2 * d.lower.intensity / (p.v_g * p.v_g);
    const double g_net =
        analytics::gain_single(p, d.upper) - analytics::gain_single(p, d.lower);

    const double hz = z / nz_quad;
    const double ht = t_obs / nt_quad;
    // The kernel is separable; the trapezoid sum is evaluated as the product
    // of the two 1-D trapezoid sums, which is identical to the full 2-D sum.
    double sum_z = 0.0;
    for (int i = 0; i <= nz_quad; ++i) {
        const double w = (i == 0 || i == nz_quad) ? 0.5 : 1.0;
        sum_z += w * std::exp(2.0 * g_net * (z - i * hz));
    }
    double sum_t = 0.0;
    for (int j = 0; j <= nt_quad; ++j) {
        const double w = (j == 0 || j == nt_quad) ? 0.5 : 1.0;
        sum_t += w * std::exp(-p.gamma * (t_obs - j * ht));
    }
    return (w_upper + w_lower) * sum_z * hz * sum_t * ht;
}

std::vector<double> thermal_quadrature(const WaveguideParams& p, const DualPumpConfig& d,
                                       double t_obs, int n_points,
                                       int nz_quad, int nt_quad) {
    std::vector<double> out(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double z = p.length * static_cast<double>(i + 1) / n_points;
        out[i] = thermal_quadrature_at(p, d, z, t_obs, nz_quad, nt_quad);
    }
    return out;
}

McResult monte_carlo_density(const WaveguideParams& p, const DualPumpConfig& d,
                             const Grid& grid, double t_obs, int trajectories,
                             std::uint64_t seed, int threads) {
    if (trajectories < 2)
        throw ConfigError("monte carlo requires at least 2 trajectories");
    const auto nt = static_cast<std::int64_t>(std::llround(t_obs / grid.dt));
    const int nz = grid.nz;
    // Total complex variance per cell-step implementing the delta-correlated
    // strengths: Gamma*(n_bar+1) (upper) and Gamma*n_bar (lower), each
    // divided by (dz * dt) and integrated over dt.
    const double var_upper = p.gamma * (p.n_bar + 1.0) * grid.dt / grid.dz;
    const double var_lower = p.gamma * p.n_bar * grid.dt / grid.dz;

    std::vector<double> samples(static_cast<size_t>(trajectories) * nz);
    auto run_range = [&](int lo, int hi) {
        for (int m = lo; m < hi; ++m) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed),
                              static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(m)};
            std::mt19937_64 rng(seq);
            Engine engine(p, d, grid, Mode::full);
            for (std::int64_t k = 0; k < nt; ++k)
                engine.step(k * grid.dt, cplx{0.0, 0.0}, &rng, var_upper, var_lower);
            double* slot = samples.data() + static_cast<size_t>(m) * nz;
            for (int i = 1; i <= nz; ++i) {
                const double rho = std::norm(engine.psi()[i]);
                if (!std::isfinite(rho))
                    throw NumericalError("non-finite Monte Carlo sample");
                slot[i - 1] = rho;
            }
        }
    };

    int n_threads = threads > 0 ? threads
                                : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min(n_threads, trajectories));
    if (n_threads == 1) {
        run_range(0, trajectories);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr error;
        std::mutex error_mutex;
        for (int w = 0; w < n_threads; ++w) {
            const int lo = trajectories * w / n_threads;
            const int hi = trajectories * (w + 1) / n_threads;
            pool.emplace_back([&, lo, hi] {
                try {
                    run_range(lo, hi);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (error) std::rethrow_exception(error);
    }

    // Deterministic reduction in trajectory-index order.
    McResult out;
    out.grid = grid;
    out.trajectories = trajectories;
    out.mean_density.assign(nz, 0.0);
    out.std_error.assign(nz, 0.0);
    for (int m = 0; m < trajectories; ++m) {
        const double* slot = samples.data() + static_cast<size_t>(m) * nz;
        for (int i = 0; i < nz; ++i) out.mean_density[i] += slot[i];
    }
    for (int i = 0; i < nz; ++i) out.mean_density[i] /= trajectories;
    for (int m = 0; m < trajectories; ++m) {
        const double* slot = samples.data() + static_cast<size_t>(m) * nz;
        for (int i = 0; i < nz; ++i) {
            const double dev = slot[i] - out.mean_density[i];
            out.std_error[i] += dev * dev;
        }
    }
    for (int i = 0; i < nz; ++i)
        out.std_error[i] = std::sqrt(out.std_error[i] /
                                     (static_cast<double>(trajectories) - 1.0) /
                                     trajectories);
    return out;
}

} // namespace sbs::prop
