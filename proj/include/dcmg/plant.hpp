#pragma once

#include <optional>

namespace dcmg {

/**
 * Physical constants of the simplified EV-integrated DC bus:
 * a boost converter feeding a constant-power load (the EV charger),
 * an optional resistive load, and a virtual capacitor acting in
 * parallel with the physical bus capacitance.
 */
struct PlantParams {
    double v_in_nominal = 50.0;     // supply voltage [V]
    double p_cpl = 2800.0;          // rated EV / CPL power [W]
    double r_series = 0.07;         // converter series resistance [ohm]
    double l_ind = 10.5e-3;         // converter inductance [H]
    double c_dc = 553.94e-6;        // DC-bus capacitance [F]
    double c_vir = 0.0;             // virtual capacitance [F]
    std::optional<double> r_load{}; // resistive CVL [ohm]; nullopt = none
    double v_cpl_min = 60.0;        // CPL undervoltage current-limit threshold [V]
    bool use_r_series = false;      // series R is not part of the nominal model

    double c_eff() const { return c_dc + c_vir; }

    /// Throws InvalidInput naming the offending field.
    void validate() const;
};

/// The two converter states.
struct PlantState {
    double i_l = 0.0;   // inductor current [A]
    double v_dc = 0.0;  // bus voltage [V]
};

struct PlantDerivative {
    double di_l_dt = 0.0;   // [A/s]
    double dv_dc_dt = 0.0;  // [V/s]
};

/// CPL current draw, clamped to constant-current below v_cpl_min.
double cpl_current(double p_cpl, double v_dc, double v_cpl_min);

/// Negative incremental impedance dV/dI = -V^2/P of the CPL.
double nii_impedance(double p_cpl, double v_dc);

/// Bus capacitance plus the control-emulated virtual capacitance.
double effective_capacitance(double c_dc, double c_vir);

/// Transient compensation power of the virtual capacitor, V*C_vir*dV/dt.
double virtual_power(double v_dc, double dv_dc_dt, double c_vir);

/**
 * Averaged boost-converter dynamics with CPL, optional CVL and the
 * virtual-capacitor power term. The virtual power is self-referential
 * through dV_dc/dt; callers break the algebraic loop by passing the
 * previous accepted dV_dc/dt sample (prev_dv_dc_dt).
 *
 * Throws PlantCollapse if v_dc <= 0 while the CPL draws power.
 */
PlantDerivative plant_derivatives(const PlantState& state, double mu, double v_in,
                                  const PlantParams& params, double prev_dv_dc_dt = 0.0);

}  // namespace dcmg
