#include "dcmg/control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dcmg/errors.hpp"

namespace dcmg {

void GitsmbcGains::validate() const {
    auto positive = [](double v, const char* name) {
        if (!std::isfinite(v) || v <= 0.0)
            throw InvalidInput(std::string(name) + " must be finite and > 0");
    };
    positive(beta1, "gitsmbc.beta1");
    positive(beta2, "gitsmbc.beta2");
    positive(beta3, "gitsmbc.beta3");
    positive(kappa_a, "gitsmbc.kappa_a");
    positive(kappa_b, "gitsmbc.kappa_b");
    if (!std::isfinite(beta_ub1) || beta_ub1 < 0.0)
        throw InvalidInput("gitsmbc.beta_ub1 must be finite and >= 0");
    if (!std::isfinite(beta_ub2) || beta_ub2 < 0.0)
        throw InvalidInput("gitsmbc.beta_ub2 must be finite and >= 0");
    if (exp_x <= 0 || exp_y <= 0)
        throw InvalidInput("gitsmbc.exp_x and exp_y must be positive integers");
    if (!(chi > 0.0 && chi < 1.0)) throw InvalidInput("gitsmbc.chi must lie in (0,1)");
    if (!std::isfinite(boundary_layer) || boundary_layer < 0.0)
        throw InvalidInput("gitsmbc.boundary_layer must be finite and >= 0");
    if (!(mu_min >= 0.0 && mu_min < mu_max && mu_max <= 1.0))
        throw InvalidInput("gitsmbc duty limits must satisfy 0 <= mu_min < mu_max <= 1");
    positive(int_floor, "gitsmbc.int_floor");
    positive(lambda_max, "gitsmbc.lambda_max");
    positive(tau_max, "gitsmbc.tau_max");
}

void EsmcGains::validate() const {
    if (!std::isfinite(lambda) || lambda <= 0.0)
        throw InvalidInput("esmc.lambda must be finite and > 0");
    if (!std::isfinite(eta) || eta <= 0.0) throw InvalidInput("esmc.eta must be finite and > 0");
    if (!std::isfinite(boundary_layer) || boundary_layer < 0.0)
        throw InvalidInput("esmc.boundary_layer must be finite and >= 0");
    if (!std::isfinite(deriv_tau) || deriv_tau <= 0.0)
        throw InvalidInput("esmc.deriv_tau must be finite and > 0");
    if (!(mu_min >= 0.0 && mu_min < mu_max && mu_max <= 1.0))
        throw InvalidInput("esmc duty limits must satisfy 0 <= mu_min < mu_max <= 1");
}

double signed_fractional_power(double u, double p) {
    if (!(p > 0.0)) throw InvalidInput("signed_fractional_power: exponent must be > 0");
    if (u == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(u), p), u);
}

double smooth_sgn(double u, double layer) {
    if (layer <= 0.0) return u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
    return std::clamp(u / layer, -1.0, 1.0);
}

double backstepping_virtual_control(double e1, double zeta1_ref_dot, double beta1) {
    return -beta1 * e1 + zeta1_ref_dot;
}

double sliding_surface(double e2, double int_e2, const GitsmbcGains& gains) {
    return e2 + gains.kappa_a * int_e2 +
           gains.kappa_b * signed_fractional_power(int_e2, gains.surface_ratio());
}

double ifprl_rate(double sigma, const GitsmbcGains& gains) {
    const double s = smooth_sgn(sigma, gains.boundary_layer);
    return -gains.beta2 * s - gains.beta3 * std::pow(std::abs(sigma), gains.chi) * s;
}

double analytic_convergence_time(double sigma0, double beta3, double chi) {
    if (!(beta3 > 0.0) || !(chi > 0.0 && chi < 1.0))
        throw InvalidInput("analytic_convergence_time: need beta3 > 0 and chi in (0,1)");
    return std::pow(std::abs(sigma0), 1.0 - chi) / (beta3 * (1.0 - chi));
}

StepResult gitsmbc_step(const CanonicalState& canon, const ReferenceFrame& refs,
                        const LinearizationCoeffs& coeffs, ControllerState& cstate,
                        const GitsmbcGains& gains, double dt) {
    if (!(dt > 0.0)) throw InvalidInput("gitsmbc_step: dt must be > 0");

    const double e1 = canon.zeta1 - refs.zeta1_ref;
    const double lambda_raw = backstepping_virtual_control(e1, refs.zeta1_ref_dot, gains.beta1);
    const bool governed = std::abs(lambda_raw) > gains.lambda_max;
    const double lambda_v = std::clamp(lambda_raw, -gains.lambda_max, gains.lambda_max);
    const double e2 = canon.zeta2 - lambda_v;
    // tau feeds forward dLambda/dt: zero while the governor holds,
    // bounded by the same authority limit otherwise
    const double tau =
        governed ? 0.0
                 : std::clamp(-gains.beta1 * (canon.zeta2 - refs.zeta1_ref_dot) +
                                  refs.zeta1_ref_ddot,
                              -gains.tau_max, gains.tau_max);
    const double sigma = sliding_surface(e2, cstate.int_e2, gains);

    const double psi = gains.surface_ratio() - 1.0;
    const double int_mag = std::max(std::abs(cstate.int_e2), gains.int_floor);
    const double s_sgn = smooth_sgn(sigma, gains.boundary_layer);

    const double switching = (gains.beta2 + gains.beta_ub1 + gains.beta_ub2) * s_sgn +
                             gains.beta3 * std::pow(std::abs(sigma), gains.chi) * s_sgn;
    const double mu_raw =
        (-1.0 / coeffs.b_x) * (coeffs.a_x - tau + gains.kappa_a * e2 +
                               gains.kappa_b * (1.0 + psi) * e2 * std::pow(int_mag, psi) +
                               switching);
    if (!std::isfinite(mu_raw)) throw ControllerFault("gitsmbc_step: non-finite duty command");

    const bool sat_high = mu_raw > gains.mu_max;
    const bool sat_low = mu_raw < gains.mu_min;
    const double mu = std::clamp(mu_raw, gains.mu_min, gains.mu_max);

    // Conditional integration: frozen while saturated, except when the
    // integral update itself unwinds the saturation. With psi < 0 the
    // |int_e2|^psi weight shrinks as |int_e2| grows, so integrating a
    // deficit (e2 < 0 at the high rail, e2 > 0 at the low rail) pulls
    // mu_raw back toward the admissible range; freezing there instead
    // deadlocks the law at the rail from a zero-integral start.
    bool integrate = !sat_high && !sat_low;
    if (sat_high && e2 < 0.0) integrate = true;
    if (sat_low && e2 > 0.0) integrate = true;
    if (integrate) cstate.int_e2 += e2 * dt;
    cstate.last_mu = mu;

    StepResult out;
    out.mu = mu;
    out.diag.e1 = e1;
    out.diag.e2 = e2;
    out.diag.sigma_s = sigma;
    out.diag.theta2 = 0.5 * e1 * e1 + 0.5 * sigma * sigma;
    out.diag.saturated = sat_high || sat_low;
    return out;
}

StepResult esmc_step(const PlantState& plant, const ReferenceFrame& refs, double v_in,
                     EsmcState& estate, const EsmcGains& gains, double dt) {
    if (!(dt > 0.0)) throw InvalidInput("esmc_step: dt must be > 0");

    const double err = refs.v_dc_ref - plant.v_dc;
    if (estate.primed) {
        const double raw_rate = (err - estate.prev_err) / dt;
        const double alpha = dt / (gains.deriv_tau + dt);
        estate.err_rate += alpha * (raw_rate - estate.err_rate);
    } else {
        estate.err_rate = 0.0;
        estate.primed = true;
    }
    estate.prev_err = err;

    const double s = gains.lambda * err + estate.err_rate;
    // quasi-static equivalent control from the measured bus voltage;
    // equals 1 - v_in/v_dc_ref once the error is driven to zero
    const double v_meas = std::max(plant.v_dc, 0.5 * v_in);
    const double mu_eq = std::clamp(1.0 - v_in / v_meas, gains.mu_min, gains.mu_max);
    const double mu_raw = mu_eq + gains.eta * smooth_sgn(s, gains.boundary_layer);
    if (!std::isfinite(mu_raw)) throw ControllerFault("esmc_step: non-finite duty command");

    const double mu = std::clamp(mu_raw, gains.mu_min, gains.mu_max);
    estate.last_mu = mu;

    StepResult out;
    out.mu = mu;
    out.diag.e1 = err;
    out.diag.e2 = estate.err_rate;
    out.diag.sigma_s = s;
    out.diag.theta2 = 0.5 * err * err + 0.5 * s * s;
    out.diag.saturated = mu != mu_raw;
    return out;
}

}  // namespace dcmg
