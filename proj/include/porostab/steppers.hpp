#pragma once

#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "porostab/analysis.hpp"
#include "porostab/assembly.hpp"
#include "porostab/cases.hpp"
#include "porostab/linsolve.hpp"
#include "porostab/materials.hpp"
#include "porostab/mesh.hpp"

namespace porostab {

/// Full solution at one time level.
struct State {
  Eigen::VectorXd u;        // nodal displacements, m
  Eigen::VectorXd p;        // cell pressures, Pa
  Eigen::VectorXd phi;      // cell porosities
  Eigen::VectorXd sigma_v;  // cell volumetric total stress, Pa
  Eigen::VectorXd eps_v;    // cell volumetric strain
  double time = 0.0;        // s
};

enum class Scheme { FullyImplicit, FixedStress };
enum class FsForm { StressRate, Porosity };

struct SchemeConfig {
  Scheme scheme = Scheme::FullyImplicit;
  int fs_iterations = 1;  // 1 = explicit fixed stress
  FsForm fs_form = FsForm::StressRate;
  StabilizationConfig stabilization;

  void validate() const;
};

/// Factorization cache for the operators of one assembled system; the
/// monolithic and flow matrices depend on the step size, the mechanics
/// matrix does not.
class SystemSolvers {
 public:
  SystemSolvers(const StructuredMesh& mesh, const AssembledSystem& sys);

  const FactorizedOperator& mechanics();
  const FactorizedOperator& fs_flow(double dt);
  const FactorizedOperator& monolithic(double dt);

 private:
  const StructuredMesh& mesh_;
  const AssembledSystem& sys_;
  std::optional<FactorizedOperator> mech_;
  std::map<double, FactorizedOperator> fs_flow_;
  std::map<double, FactorizedOperator> monolithic_;
};

/// Advances states of one assembled problem with backward Euler under the
/// three coupling strategies.
class Stepper {
 public:
  Stepper(const StructuredMesh& mesh, const MaterialSet& mats,
          const AssembledSystem& sys, double reference_pressure = 0.0);

  State initial_state() const;

  /// Monolithic backward Euler step of the coupled block system.
  State step_fully_implicit(const State& state, double dt, const Loads& loads,
                            double* mass_residual = nullptr);

  /// One fixed-stress step: cfg.fs_iterations flow+mechanics passes, the
  /// stress-rate term lagging per the explicit splitting. prev holds level
  /// n-1 (pass the initial state on the first step); dt_prev rescales the
  /// lagged stress increment when the step size changes.
  State step_fixed_stress(const State& state, const State& prev, double dt,
                          double dt_prev, const SchemeConfig& cfg, const Loads& loads,
                          double* mass_residual = nullptr);

  /// Penalty-form update p <- p - K_dr div(u - u0) followed by the mechanics
  /// solve; valid only in the strict undrained incompressible limit
  /// (b = 1, 1/M = 0, kappa = 0).
  State uzawa_reference_step(const State& state, const State& initial,
                             const Loads& loads);

  const StructuredMesh& mesh() const { return mesh_; }
  const AssembledSystem& system() const { return sys_; }

 private:
  struct FlowRhs {
    Eigen::VectorXd rhs;
    double lag_term_l1 = 0.0;  // scale of the lagged (explicit) contribution
  };

  State mechanics_update(const State& base, const Eigen::VectorXd& p_new, double dt,
                         const Loads& loads);
  void refresh_cell_fields(State& s) const;
  FlowRhs flow_rhs_fixed_stress(const State& state, const State& prev, double dt,
                                double dt_prev, int iteration, const State& latest,
                                const SchemeConfig& cfg, const Loads& loads) const;

  const StructuredMesh& mesh_;
  const MaterialSet& mats_;
  const AssembledSystem& sys_;
  SystemSolvers solvers_;

  // Per-cell constitutive coefficients.
  Eigen::VectorXd b_, K_dr_, invM_, invN_, phi0_, invKf_;
  double p_ref_ = 0.0;
};

struct ScheduleSegment {
  double dt_s = 0.0;
  int steps = 0;
};

struct StepDiagnostics {
  int step = 0;
  double time_s = 0.0;
  double dt_s = 0.0;
  double oscillation_index_masked = 0.0;
  double max_p = 0.0;
  double min_p = 0.0;
  double divu_norm = 0.0;
  double mass_residual = 0.0;
};

struct Snapshot {
  int step = 0;
  State state;
};

struct Trajectory {
  std::vector<StepDiagnostics> diagnostics;  // one row per level, including t=0
  std::vector<Snapshot> snapshots;           // initial, every stride-th step, final
  const State& final_state() const { return snapshots.back().state; }
};

/// Runs the scenario through the schedule. snapshot_stride <= 0 keeps only
/// the initial and final snapshots.
Trajectory run_simulation(const Scenario& scenario, const SchemeConfig& cfg,
                          const std::vector<ScheduleSegment>& schedule,
                          int snapshot_stride = 1);

}  // namespace porostab
