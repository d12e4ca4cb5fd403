#include "porostab/steppers.hpp"

#include <cmath>
#include <stdexcept>

namespace porostab {

void SchemeConfig::validate() const {
  if (fs_iterations < 1)
    throw std::invalid_argument("scheme: fs_iterations must be >= 1");
  stabilization.validate();
}

SystemSolvers::SystemSolvers(const StructuredMesh& mesh, const AssembledSystem& sys)
    : mesh_(mesh), sys_(sys) {}

const FactorizedOperator& SystemSolvers::mechanics() {
  if (!mech_) mech_.emplace(sys_.A);
  return *mech_;
}

const FactorizedOperator& SystemSolvers::fs_flow(double dt) {
  auto it = fs_flow_.find(dt);
  if (it != fs_flow_.end()) return it->second;
  SparseMatrix M = sys_.S;
  M += SparseMatrix(dt * sys_.T);
  M += SparseMatrix(sys_.D_fs.asDiagonal());
  return fs_flow_.emplace(dt, FactorizedOperator(M)).first->second;
}

const FactorizedOperator& SystemSolvers::monolithic(double dt) {
  auto it = monolithic_.find(dt);
  if (it != monolithic_.end()) return it->second;

  const int ndof = mesh_.n_dofs();
  const int ncell = mesh_.n_cells();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(sys_.A.nonZeros()) + 2 * sys_.B.nonZeros() +
                sys_.T.nonZeros() + sys_.S.nonZeros() + ncell);

  for (int col = 0; col < sys_.A.outerSize(); ++col)
    for (SparseMatrix::InnerIterator a(sys_.A, col); a; ++a)
      trips.emplace_back(static_cast<int>(a.row()), col, a.value());

  for (int dof = 0; dof < sys_.B.outerSize(); ++dof) {
    if (sys_.dirichlet.is_constrained(dof)) continue;
    for (SparseMatrix::InnerIterator b(sys_.B, dof); b; ++b) {
      const int cell = static_cast<int>(b.row());
      trips.emplace_back(ndof + cell, dof, b.value());
      trips.emplace_back(dof, ndof + cell, -b.value());
    }
  }

  for (int col = 0; col < sys_.T.outerSize(); ++col)
    for (SparseMatrix::InnerIterator t(sys_.T, col); t; ++t)
      trips.emplace_back(ndof + static_cast<int>(t.row()), ndof + col, dt * t.value());
  for (int col = 0; col < sys_.S.outerSize(); ++col)
    for (SparseMatrix::InnerIterator s(sys_.S, col); s; ++s)
      trips.emplace_back(ndof + static_cast<int>(s.row()), ndof + col, s.value());
  for (int e = 0; e < ncell; ++e)
    if (sys_.D_fim[e] != 0.0) trips.emplace_back(ndof + e, ndof + e, sys_.D_fim[e]);

  SparseMatrix M(ndof + ncell, ndof + ncell);
  M.setFromTriplets(trips.begin(), trips.end());
  return monolithic_.emplace(dt, FactorizedOperator(M)).first->second;
}

Stepper::Stepper(const StructuredMesh& mesh, const MaterialSet& mats,
                 const AssembledSystem& sys, double reference_pressure)
    : mesh_(mesh), mats_(mats), sys_(sys), solvers_(mesh, sys),
      p_ref_(reference_pressure) {
  const int n = mesh.n_cells();
  b_.resize(n);
  K_dr_.resize(n);
  invM_.resize(n);
  invN_.resize(n);
  phi0_.resize(n);
  invKf_.resize(n);
  for (int e = 0; e < n; ++e) {
    const int r = mesh.region_of_cell(e);
    const auto& m = mats.material(r);
    const auto& d = mats.derived(r);
    b_[e] = d.b;
    K_dr_[e] = m.K_dr;
    invM_[e] = d.invM;
    invN_[e] = d.invN;
    phi0_[e] = m.phi0;
    invKf_[e] = m.K_f.reciprocal();
  }
}

State Stepper::initial_state() const {
  State s;
  s.u = Eigen::VectorXd::Zero(mesh_.n_dofs());
  s.p = Eigen::VectorXd::Constant(mesh_.n_cells(), p_ref_);
  s.eps_v = Eigen::VectorXd::Zero(mesh_.n_cells());
  s.sigma_v = -b_.cwiseProduct(s.p);
  s.phi = phi0_;
  s.time = 0.0;
  return s;
}

void Stepper::refresh_cell_fields(State& s) const {
  const double V = mesh_.cell_volume();
  s.eps_v = (sys_.div_op * s.u) / V;
  s.sigma_v = K_dr_.cwiseProduct(s.eps_v) - b_.cwiseProduct(s.p);
  s.phi = phi0_ + b_.cwiseProduct(s.eps_v) +
          invN_.cwiseProduct((s.p.array() - p_ref_).matrix());
}

State Stepper::mechanics_update(const State& base, const Eigen::VectorXd& p_new,
                                double dt, const Loads& loads) {
  Eigen::VectorXd rhs = loads.Q_u + apply_transpose(sys_.B, p_new);
  for (int d = 0; d < mesh_.n_dofs(); ++d)
    if (sys_.dirichlet.is_constrained(d)) rhs[d] = 0.0;

  State out;
  out.u = solvers_.mechanics().solve(rhs);
  out.p = p_new;
  out.time = base.time + dt;
  refresh_cell_fields(out);
  return out;
}

State Stepper::step_fully_implicit(const State& state, double dt, const Loads& loads,
                                   double* mass_residual) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const int ndof = mesh_.n_dofs();
  const int ncell = mesh_.n_cells();

  Eigen::VectorXd rhs(ndof + ncell);
  Eigen::VectorXd Qu = loads.Q_u;
  for (int d = 0; d < ndof; ++d)
    if (sys_.dirichlet.is_constrained(d)) Qu[d] = 0.0;
  rhs.head(ndof) = Qu;
  rhs.tail(ncell) = dt * loads.Q_p + sys_.B * state.u +
                    sys_.D_fim.cwiseProduct(state.p) + sys_.S * state.p;

  const Eigen::VectorXd x = solvers_.monolithic(dt).solve(rhs);

  State out;
  out.u = x.head(ndof);
  out.p = x.tail(ncell);
  out.time = state.time + dt;
  refresh_cell_fields(out);

  if (mass_residual) {
    const Eigen::VectorXd flow = sys_.B * out.u + sys_.D_fim.cwiseProduct(out.p) +
                                 sys_.S * out.p + dt * (sys_.T * out.p);
    const Eigen::VectorXd r = rhs.tail(ncell) - flow;
    const double denom = rhs.tail(ncell).cwiseAbs().sum() + flow.cwiseAbs().sum();
    *mass_residual = std::abs(r.sum()) / std::max(denom, 1e-300);
  }
  return out;
}

Stepper::FlowRhs Stepper::flow_rhs_fixed_stress(const State& state, const State& prev,
                                                double dt, double dt_prev,
                                                int iteration, const State& latest,
                                                const SchemeConfig& cfg,
                                                const Loads& loads) const {
  const double V = mesh_.cell_volume();
  FlowRhs out;
  out.rhs = dt * loads.Q_p + sys_.S * state.p;

  if (cfg.fs_form == FsForm::StressRate) {
    // Lagged volumetric-stress increment; latest mechanics inside a step.
    Eigen::VectorXd dsig;
    if (iteration == 1)
      dsig = (state.sigma_v - prev.sigma_v) * (dt / dt_prev);
    else
      dsig = latest.sigma_v - state.sigma_v;
    const Eigen::VectorXd lag = V * b_.cwiseQuotient(K_dr_).cwiseProduct(dsig);
    out.rhs += sys_.D_fs.cwiseProduct(state.p);
    out.rhs -= lag;
    out.lag_term_l1 = lag.cwiseAbs().sum();
  } else {
    // Porosity form: accumulation from the lagged porosity update.
    const Eigen::VectorXd& eps_star = (iteration == 1) ? state.eps_v : latest.eps_v;
    const Eigen::VectorXd& p_star = (iteration == 1) ? state.p : latest.p;
    const Eigen::VectorXd b2_over_K = b_.cwiseProduct(b_).cwiseQuotient(K_dr_);
    const Eigen::VectorXd phi_const = phi0_ +
                                      Eigen::VectorXd(invN_ * (-p_ref_)) +
                                      b_.cwiseProduct(eps_star) -
                                      b2_over_K.cwiseProduct(p_star);
    const Eigen::VectorXd lag =
        V * (state.phi + invKf_.cwiseProduct(phi0_).cwiseProduct(state.p) - phi_const);
    out.rhs += lag;
    out.lag_term_l1 = lag.cwiseAbs().sum();
  }
  return out;
}

State Stepper::step_fixed_stress(const State& state, const State& prev, double dt,
                                 double dt_prev, const SchemeConfig& cfg,
                                 const Loads& loads, double* mass_residual) {
  if (!(dt > 0.0) || !(dt_prev > 0.0))
    throw std::invalid_argument("step: dt must be positive");
  cfg.validate();

  State result = state;
  Eigen::VectorXd eps_star = state.eps_v, p_star = state.p;  // porosity-form lag pair

  for (int it = 1; it <= cfg.fs_iterations; ++it) {
    const FlowRhs f = flow_rhs_fixed_stress(state, prev, dt, dt_prev, it, result, cfg,
                                            loads);
    if (cfg.fs_form == FsForm::Porosity && it > 1) {
      eps_star = result.eps_v;
      p_star = result.p;
    }
    const Eigen::VectorXd p_new = solvers_.fs_flow(dt).solve(f.rhs);

    if (mass_residual && it == cfg.fs_iterations) {
      const Eigen::VectorXd flow = sys_.D_fs.cwiseProduct(p_new) + sys_.S * p_new +
                                   dt * (sys_.T * p_new);
      const Eigen::VectorXd r = f.rhs - flow;
      const double denom = f.rhs.cwiseAbs().sum() + flow.cwiseAbs().sum();
      *mass_residual = std::abs(r.sum()) / std::max(denom, 1e-300);
    }
    result = mechanics_update(state, p_new, dt, loads);
  }

  if (cfg.fs_form == FsForm::Porosity) {
    // Store the porosity actually passed between the solvers.
    const Eigen::VectorXd b2_over_K = b_.cwiseProduct(b_).cwiseQuotient(K_dr_);
    result.phi = phi0_ + invN_.cwiseProduct(result.p.array() - p_ref_) +
                 b_.cwiseProduct(eps_star) +
                 b2_over_K.cwiseProduct(result.p - p_star);
  }
  return result;
}

State Stepper::uzawa_reference_step(const State& state, const State& initial,
                                    const Loads& loads) {
  for (const auto& [region, mat] : mats_.all()) {
    const auto& d = mats_.derived(region);
    if (d.b != 1.0 || d.invM != 0.0 || mat.kappa != 0.0)
      throw std::logic_error(
          "uzawa_reference_step: requires b = 1, 1/M = 0, kappa = 0 everywhere");
  }
  const Eigen::VectorXd p_new =
      state.p - K_dr_.cwiseProduct(state.eps_v - initial.eps_v);
  return mechanics_update(state, p_new, 0.0, loads);
}

namespace {

bool mask_has_interior_face(const StructuredMesh& mesh, const std::set<int>& mask) {
  for (const auto& f : mesh.interior_faces())
    if (mask.count(mesh.region_of_cell(f.left)) &&
        mask.count(mesh.region_of_cell(f.right)))
      return true;
  return false;
}

StepDiagnostics make_diagnostics(int step, double dt, const State& s,
                                 const StructuredMesh& mesh, const std::set<int>& mask,
                                 bool mask_usable, double mass_residual) {
  StepDiagnostics d;
  d.step = step;
  d.time_s = s.time;
  d.dt_s = dt;
  d.oscillation_index_masked = mask_usable ? oscillation_index(s.p, mesh, mask) : 0.0;
  d.max_p = s.p.maxCoeff();
  d.min_p = s.p.minCoeff();
  d.divu_norm = std::sqrt(mesh.cell_volume() * s.eps_v.squaredNorm());
  d.mass_residual = mass_residual;
  return d;
}

}  // namespace

Trajectory run_simulation(const Scenario& scenario, const SchemeConfig& cfg,
                          const std::vector<ScheduleSegment>& schedule,
                          int snapshot_stride) {
  cfg.validate();
  for (const auto& seg : schedule) {
    if (!(seg.dt_s > 0.0)) throw std::invalid_argument("schedule: dt must be positive");
    if (seg.steps < 0) throw std::invalid_argument("schedule: negative step count");
  }

  const StructuredMesh mesh = scenario.make_mesh();
  const MaterialSet mats = scenario.make_materials();
  const DirichletSet dirichlet = scenario.make_dirichlet(mesh);

  StabilizationConfig stab = cfg.stabilization;
  if (stab.enabled && stab.region_mask.empty())
    stab.region_mask.insert(scenario.stab_mask_regions.begin(),
                            scenario.stab_mask_regions.end());

  const AssembledSystem sys = assemble_system(mesh, mats, dirichlet, stab);
  Stepper stepper(mesh, mats, sys, scenario.p0);

  const std::set<int> mask(scenario.index_mask_regions.begin(),
                           scenario.index_mask_regions.end());
  const bool mask_usable = !mask.empty() && mask_has_interior_face(mesh, mask);

  Trajectory traj;
  State state = stepper.initial_state();
  State prev = state;
  traj.diagnostics.push_back(
      make_diagnostics(0, 0.0, state, mesh, mask, mask_usable, 0.0));
  traj.snapshots.push_back({0, state});

  int step = 0;
  double dt_prev = schedule.empty() ? 1.0 : schedule.front().dt_s;
  for (const auto& seg : schedule) {
    for (int i = 0; i < seg.steps; ++i) {
      ++step;
      const Loads loads = scenario.loads_at(mesh, state.time + seg.dt_s);
      double mass_res = 0.0;
      State next =
          (cfg.scheme == Scheme::FullyImplicit)
              ? stepper.step_fully_implicit(state, seg.dt_s, loads, &mass_res)
              : stepper.step_fixed_stress(state, prev, seg.dt_s, dt_prev, cfg, loads,
                                          &mass_res);
      prev = std::move(state);
      state = std::move(next);
      dt_prev = seg.dt_s;

      traj.diagnostics.push_back(
          make_diagnostics(step, seg.dt_s, state, mesh, mask, mask_usable, mass_res));
      if (snapshot_stride > 0 && step % snapshot_stride == 0)
        traj.snapshots.push_back({step, state});
    }
  }
  if (traj.snapshots.back().step != step) traj.snapshots.push_back({step, state});
  return traj;
}

}  // namespace porostab
