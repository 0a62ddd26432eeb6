#pragma once

#include "dcmg/plant.hpp"
#include "dcmg/transform.hpp"

namespace dcmg {

/**
 * Gains of the composite controller: backstepping outer loop, global
 * integral terminal sliding surface, and the improved fractional-power
 * reaching law.
 *
 * exp_x/exp_y is the published surface exponent ratio (3/5 = 0.6); the
 * signed fractional power keeps the surface odd for negative integrals,
 * and |int_e2| is floored at int_floor inside the x/y - 1 power of the
 * control law, which is singular at zero integral.
 */
struct GitsmbcGains {
    double beta1 = 2000.0;      // backstepping gain [1/s]
    double beta2 = 50.0;        // constant-rate reaching gain
    double beta3 = 5.0;         // fractional-power reaching gain
    double beta_ub1 = 1.0;      // bound on the ED1-induced term
    double beta_ub2 = 1.0;      // bound on ED2
    double kappa_a = 0.2;       // integral surface gain
    double kappa_b = 0.1;       // terminal surface gain
    int exp_x = 3;              // surface exponent numerator
    int exp_y = 5;              // surface exponent denominator
    double chi = 0.6;           // reaching-law exponent, in (0,1)
    double boundary_layer = 0.01;  // sgn smoothing width; 0 = pure sgn
    double mu_min = 0.0;
    double mu_max = 0.95;
    double int_floor = 1e-9;
    // command governor: bounds on the virtual control [W] and on the
    // rate feedforward [W/s]. The converter can only source a bounded
    // energy rate; letting the backstepping demand exceed it starves
    // the bus through the non-minimum-phase path during large
    // transients, fatally so once the loop runs over a control delay.
    double lambda_max = 600.0;
    double tau_max = 1.2e5;

    double surface_ratio() const { return static_cast<double>(exp_x) / exp_y; }

    void validate() const;
};

/// Per-instance running state of the composite controller.
struct ControllerState {
    double int_e2 = 0.0;  // accumulated integral of e2 [W*s]
    double last_mu = 0.0;
};

/// Conventional sliding mode baseline on the voltage error.
struct EsmcGains {
    double lambda = 60.0;          // surface slope [1/s]
    double eta = 0.45;             // switching gain [duty]
    double boundary_layer = 40.0;  // surface units
    double deriv_tau = 2.0e-3;     // error-derivative filter time constant [s]
    double mu_min = 0.0;
    double mu_max = 0.95;

    void validate() const;
};

struct EsmcState {
    double prev_err = 0.0;
    double err_rate = 0.0;
    bool primed = false;
    double last_mu = 0.0;
};

struct ControlDiagnostics {
    double e1 = 0.0;       // energy tracking error [J]
    double e2 = 0.0;       // rate tracking error [W]
    double sigma_s = 0.0;  // sliding surface value
    double theta2 = 0.0;   // composite Lyapunov value
    bool saturated = false;
};

struct StepResult {
    double mu = 0.0;
    ControlDiagnostics diag;
};

/// sgn(u) * |u|^p, the odd real-valued power.
double signed_fractional_power(double u, double p);

/// sgn with an optional saturated linear ramp of half-width `layer`.
double smooth_sgn(double u, double layer);

/// Backstepping virtual input: -beta1*e1 + zeta1_ref_dot.
double backstepping_virtual_control(double e1, double zeta1_ref_dot, double beta1);

/// Global integral terminal sliding surface over (e2, int_e2).
double sliding_surface(double e2, double int_e2, const GitsmbcGains& gains);

/// Reaching-law surface rate: -beta2*sgn(s) - beta3*|s|^chi*sgn(s).
double ifprl_rate(double sigma, const GitsmbcGains& gains);

/// Closed-form time for the fractional-power term alone to drive
/// sigma0 to zero (beta2's acceleration ignored).
double analytic_convergence_time(double sigma0, double beta3, double chi);

/**
 * One composite-control period. Computes the error chain, the surface
 * and the duty command, clamps to [mu_min, mu_max] and advances the e2
 * integral with conditional anti-windup (see notes in the source).
 */
StepResult gitsmbc_step(const CanonicalState& canon, const ReferenceFrame& refs,
                        const LinearizationCoeffs& coeffs, ControllerState& cstate,
                        const GitsmbcGains& gains, double dt);

/// One baseline-SMC period: feedforward equilibrium duty plus a
/// boundary-layer switching term on s = lambda*e + de/dt.
StepResult esmc_step(const PlantState& plant, const ReferenceFrame& refs, double v_in,
                     EsmcState& estate, const EsmcGains& gains, double dt);

}  // namespace dcmg
