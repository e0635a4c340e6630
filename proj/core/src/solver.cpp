#include "mildflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mildflow {

// ---------------------------------------------------------------------------
// EvolutionSystem

EvolutionSystem EvolutionSystem::general(DiagonalSemigroup sg, InputOperator B, Nonlinearity f,
                                         std::optional<InputOperator> B2) {
  const std::size_t n = sg.size();
  EvolutionSystem s(SystemMode::general, std::move(B), B2 ? std::move(*B2) : InputOperator::identity(n), std::move(f));
  s.kappa_ = sg.default_kappa();
  s.sg_ = std::move(sg);
  s.validate();
  return s;
}

EvolutionSystem EvolutionSystem::analytic(DiagonalSemigroup sg, double alpha, InputOperator B, Nonlinearity f,
                                          std::optional<InputOperator> B2, AnalyticOptions opts) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("analytic mode needs alpha in [0, 1)");
  if (!sg.analytic()) throw std::invalid_argument("analytic mode needs an analytic semigroup");
  const std::size_t n = sg.size();
  EvolutionSystem s(SystemMode::analytic, std::move(B), B2 ? std::move(*B2) : InputOperator::identity(n), std::move(f));
  if (s.B2_.declared_class().kind != OperatorClassKind::bounded)
    throw std::invalid_argument("analytic mode needs a bounded B2");
  const auto& cls = s.B_.declared_class();
  const bool regular = cls.kind == OperatorClassKind::bounded ||
                       (cls.kind == OperatorClassKind::smooth_class && cls.param > alpha);
  if (!regular && !opts.waive_input_regularity)
    throw std::invalid_argument("analytic mode needs B in smooth_class(alpha + eps), got " + cls.describe());
  s.alpha_ = alpha;
  s.irregular_input_ = !regular;
  s.kappa_ = opts.kappa.value_or(sg.default_kappa());
  if (!(s.kappa_ > sg.growth_bound())) throw std::invalid_argument("kappa must exceed the growth bound");
  s.weights_ = fractional_weights(sg, alpha);
  s.sg_ = std::move(sg);
  s.validate();
  return s;
}

EvolutionSystem EvolutionSystem::bounded_generator(DenseGenerator A, InputOperator B, Nonlinearity f,
                                                   std::optional<InputOperator> B2) {
  const std::size_t n = A.size();
  EvolutionSystem s(SystemMode::bounded_generator, std::move(B), B2 ? std::move(*B2) : InputOperator::identity(n),
                    std::move(f));
  if (s.B_.declared_class().kind != OperatorClassKind::bounded ||
      s.B2_.declared_class().kind != OperatorClassKind::bounded)
    throw std::invalid_argument("bounded generator mode needs bounded input operators");
  s.dense_ = std::move(A);
  s.validate();
  return s;
}

void EvolutionSystem::validate() const {
  const std::size_t n = sg_ ? sg_->size() : dense_->size();
  if (B_.modes() != n) throw std::invalid_argument("B has the wrong number of modes");
  if (B2_.modes() != n || B2_.inputs() != n) throw std::invalid_argument("B2 must be square of the state dimension");
  if (!f_.eval || !f_.lipschitz) throw std::invalid_argument("nonlinearity needs eval and lipschitz");
}

const DiagonalSemigroup& EvolutionSystem::semigroup() const {
  if (!sg_) throw std::logic_error("system has a dense generator");
  return *sg_;
}

const DenseGenerator& EvolutionSystem::dense() const {
  if (!dense_) throw std::logic_error("system has a diagonal generator");
  return *dense_;
}

double EvolutionSystem::M() const { return sg_ ? sg_->M() : dense_->M(); }
double EvolutionSystem::lambda() const { return sg_ ? sg_->lambda() : dense_->lambda(); }

double EvolutionSystem::working_norm(const SpectralState& x) const {
  return weights_.size() == 0 ? norm_x(x) : weighted_norm(x, weights_);
}

EvolutionSystem EvolutionSystem::with_nonlinearity(Nonlinearity f) const {
  EvolutionSystem s = *this;
  s.f_ = std::move(f);
  s.validate();
  return s;
}

void SolverConfig::validate() const {
  if (substeps_per_window < 8) throw std::invalid_argument("substeps_per_window must be at least 8");
  if (!(picard_tol > 0.0)) throw std::invalid_argument("picard_tol must be positive");
  if (max_picard_iters < 1) throw std::invalid_argument("max_picard_iters must be positive");
  if (!(blowup_threshold > 0.0)) throw std::invalid_argument("blowup_threshold must be positive");
  if (!(contraction_target > 0.0 && contraction_target < 1.0))
    throw std::invalid_argument("contraction_target must lie in (0, 1)");
  if (max_window_bisections < 0) throw std::invalid_argument("max_window_bisections must be nonnegative");
  if (!(max_window > 0.0) || !(min_window > 0.0) || min_window > max_window)
    throw std::invalid_argument("window limits must satisfy 0 < min_window <= max_window");
}

// ---------------------------------------------------------------------------
// Trajectory

const SpectralState& Trajectory::state_at(double t) const {
  auto it = std::lower_bound(times.begin(), times.end(), t - 1e-12 * std::max(1.0, std::abs(t)));
  if (it == times.end() || std::abs(*it - t) > 1e-12 * std::max(1.0, std::abs(t)))
    throw std::out_of_range("time is not on the trajectory grid");
  return states[static_cast<std::size_t>(it - times.begin())];
}

double Trajectory::norm_alpha(std::size_t i) const {
  return alpha_weights.size() == 0 ? norm_x(i) : weighted_norm(states[i], alpha_weights);
}

double Trajectory::sup_norm_x() const {
  double s = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) s = std::max(s, norm_x(i));
  return s;
}

std::string Trajectory::status_name() const {
  switch (status) {
    case TrajectoryStatus::completed: return "completed";
    case TrajectoryStatus::blowup: return "blowup";
    case TrajectoryStatus::failed: return "failed";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Certificates

namespace {

bool is_identity(const Matrix& m) { return m.rows() == m.cols() && m.isIdentity(0.0); }

class Engine {
 public:
  explicit Engine(const EvolutionSystem& sys) : sys_(sys) {
    b2_norm_ = weighted_operator_norm(sys.B2().coeffs());
    b2_identity_ = is_identity(sys.B2().coeffs());
    b_zero_ = sys.B().is_zero();
    b_rows_ = sys.B().row_norms();
    if (sys.B().declared_class().kind == OperatorClassKind::bounded || !sys.diagonal())
      b_norm_ = weighted_operator_norm(sys.B().coeffs());
    if (sys.mode() == SystemMode::analytic && sys.alpha() > 0.0) {
      c_alpha_ = frac_constant(sys.semigroup(), sys.alpha(), sys.kappa());
      b_rows_ = b_rows_.cwiseProduct(sys.weights());
    }
  }

  const EvolutionSystem& sys() const { return sys_; }
  bool b2_identity() const { return b2_identity_; }
  bool b_zero() const { return b_zero_; }

  double kernel(double t) const {
    if (t <= 0.0) return 0.0;
    if (sys_.mode() == SystemMode::analytic && sys_.alpha() > 0.0) {
      const double a = sys_.alpha();
      return b2_norm_ * c_alpha_ * std::exp(sys_.kappa() * t) * std::pow(t, 1.0 - a) / (1.0 - a);
    }
    if (sys_.diagonal() && sys_.B2().declared_class().kind == OperatorClassKind::smooth_class)
      return upper_bound_h(sys_.semigroup(), sys_.B2(), 0.0, t, sys_.kappa());
    return bounded_convolution_bound(sys_.M(), sys_.lambda(), b2_norm_, t);
  }

  double input_h(double t) const {
    if (t <= 0.0 || b_zero_) return 0.0;
    if (!sys_.diagonal()) return bounded_convolution_bound(sys_.M(), sys_.lambda(), *b_norm_, t);
    const Vector& mu = sys_.semigroup().eigenvalues();
    double s = 0.0;
    for (Eigen::Index n = 0; n < mu.size(); ++n) {
      const double v = b_rows_(n) * t * phi(1, mu(n) * t);
      s += v * v;
    }
    double h = std::sqrt(s);
    if (b_norm_ && sys_.mode() == SystemMode::general)
      h = std::min(h, bounded_convolution_bound(sys_.M(), sys_.lambda(), *b_norm_, t));
    return h;
  }

  /// Bound on |f(0, v)| for |v| <= u_sup.
  double f0_bound(double u_sup) const {
    const auto& f = sys_.f();
    return (f.input_free ? f.growth_sigma(0.0) : f.growth_sigma(u_sup)) + f.growth_c;
  }

  StepSelection select(double r, double u_sup, const SolverConfig& cfg, double cap) const {
    StepSelection sel;
    const double theta = cfg.contraction_target;
    const double f0 = f0_bound(u_sup);
    double t = cap;
    for (int b = 0; b <= cfg.max_window_bisections; ++b) {
      if (t < cfg.min_window) {
        sel.outcome = StepSelection::Outcome::below_min_window;
        sel.t1 = t;
        return sel;
      }
      const double h = input_h(t);
      const double k = kernel(t);
      const double grow = sys_.M() * std::exp(sys_.lambda() * t);
      // ball margin delta on the ladder max(1, r) 4^{-j}; the first feasible one wins
      double delta = std::max(1.0, r);
      for (int j = 0; j <= kDeltaLadder; ++j, delta *= 0.25) {
        const double K = grow * r + h * u_sup + delta;
        const double L = sys_.f().lipschitz(K);
        if (k * L <= theta && k * (L * K + f0) <= delta) {
          sel.t1 = t;
          sel.K = K;
          sel.lipschitz = L;
          sel.kernel = k;
          sel.h = h;
          return sel;
        }
      }
      t *= 0.5;
    }
    sel.outcome = StepSelection::Outcome::exhausted;
    return sel;
  }

 private:
  static constexpr int kDeltaLadder = 10;

  const EvolutionSystem& sys_;
  double b2_norm_ = 0.0;
  bool b2_identity_ = false;
  bool b_zero_ = false;
  Vector b_rows_;
  std::optional<double> b_norm_;
  double c_alpha_ = 0.0;
};

// Input restricted to a window starting at absolute time `offset`.
struct InputView {
  const InputSignal* pc = nullptr;
  const PolynomialSignal* poly = nullptr;
  double offset = 0.0;

  double sup(double a, double b) const {
    return pc ? pc->sup_norm(offset + a, offset + b) : poly->sup_bound(offset + a, offset + b);
  }
  std::vector<double> breakpoints(double width) const {
    std::vector<double> out;
    if (!pc) return out;
    for (double g : pc->breakpoints(offset, offset + width)) out.push_back(g - offset);
    return out;
  }
  Vector value(double s) const { return pc ? pc->at(offset + s) : poly->value(offset + s); }
};

struct Substep {
  double h = 0.0;
  Vector E, W0, W1;       // diagonal
  int dense_index = -1;   // dense
  Vector lin;             // linear input contribution, working coordinates
  Vector u;               // input value used for f on this substep (pc: constant)
};

std::vector<double> window_nodes(double width, int S, const std::vector<double>& breaks) {
  std::vector<double> nodes;
  nodes.reserve(static_cast<std::size_t>(S) + 1 + breaks.size());
  for (int j = 0; j < S; ++j) nodes.push_back(width * j / S);
  nodes.push_back(width);
  const double tol = 1e-12 * width;
  for (double b : breaks) {
    if (b <= tol || b >= width - tol) continue;
    // drop uniform nodes that collide with a breakpoint, keep the breakpoint
    nodes.erase(std::remove_if(nodes.begin() + 1, nodes.end() - 1, [&](double n) { return std::abs(n - b) <= tol; }),
                nodes.end() - 1);
    nodes.push_back(b);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

WindowSolution run_window(const Engine& eng, const SpectralState& w, const InputView& in, double width,
                          const SolverConfig& cfg) {
  const EvolutionSystem& sys = eng.sys();
  const bool diag = sys.diagonal();
  const bool analytic = sys.weights().size() != 0;
  const Vector& wts = sys.weights();
  const Eigen::Index n = static_cast<Eigen::Index>(sys.size());

  WindowSolution out;
  out.nodes = window_nodes(width, cfg.substeps_per_window, in.breakpoints(width));
  const std::size_t S = out.nodes.size() - 1;

  // Substep propagators and exact linear input terms.
  std::vector<Substep> steps(S);
  std::vector<DenseGenerator::StepIntegrals> dense_cache;
  std::map<double, int> dense_lookup;
  for (std::size_t j = 0; j < S; ++j) {
    Substep& st = steps[j];
    st.h = out.nodes[j + 1] - out.nodes[j];
    st.u = in.value(out.nodes[j]);
    if (diag) {
      const Vector& mu = sys.semigroup().eigenvalues();
      if (j > 0 && st.h == steps[j - 1].h) {
        st.E = steps[j - 1].E;
        st.W0 = steps[j - 1].W0;
        st.W1 = steps[j - 1].W1;
      } else {
        st.E.resize(n);
        st.W0.resize(n);
        st.W1.resize(n);
        for (Eigen::Index k = 0; k < n; ++k) {
          const double z = mu(k) * st.h;
          st.E(k) = std::exp(z);
          st.W0(k) = st.h * phi(1, z);
          st.W1(k) = st.h * phi(2, z);
        }
      }
      if (eng.b_zero()) {
        st.lin = Vector::Zero(n);
      } else if (in.pc) {
        st.lin = st.W0.cwiseProduct(sys.B().apply(st.u));
      } else {
        // int_0^h e^{mu (h-s)} p(t_j + s) ds = sum_k c_k k! h^{k+1} phi_{k+1}(mu h)
        const PolynomialSignal q = in.poly->shift(in.offset + out.nodes[j]);
        st.lin = Vector::Zero(n);
        double fact = 1.0;
        double hp = st.h;
        for (std::size_t k = 0; k <= q.degree(); ++k) {
          if (k > 0) {
            fact *= static_cast<double>(k);
            hp *= st.h;
          }
          const Vector bc = sys.B().apply(q.coefficients()[k]);
          for (Eigen::Index m = 0; m < n; ++m) st.lin(m) += bc(m) * fact * hp * phi(static_cast<int>(k) + 1, mu(m) * st.h);
        }
      }
      if (analytic) st.lin = st.lin.cwiseProduct(wts);
    } else {
      auto it = dense_lookup.find(st.h);
      if (it == dense_lookup.end()) {
        dense_cache.push_back(sys.dense().step_integrals(st.h));
        it = dense_lookup.emplace(st.h, static_cast<int>(dense_cache.size()) - 1).first;
      }
      st.dense_index = it->second;
      st.lin = dense_cache[static_cast<std::size_t>(st.dense_index)].W0 * sys.B().apply(st.u);
    }
  }

  auto propagate = [&](std::size_t j, const Vector& z) -> Vector {
    return diag ? Vector(steps[j].E.cwiseProduct(z)) : Vector(dense_cache[static_cast<std::size_t>(steps[j].dense_index)].T * z);
  };
  auto to_x = [&](const Vector& z) -> SpectralState {
    return analytic ? SpectralState(z.cwiseQuotient(wts)) : SpectralState(z);
  };
  auto eval_g = [&](const Vector& z, const Vector& u) -> Vector {
    Vector g = sys.f().eval(to_x(z), u).coeffs();
    if (g.size() != n) throw std::invalid_argument("nonlinearity returned a state of the wrong size");
    if (!eng.b2_identity()) g = sys.B2().coeffs() * g;
    return g;
  };

  // x^0(tau) = T(tau) w
  std::vector<Vector> Z(S + 1);
  Z[0] = w.coeffs();
  for (std::size_t j = 0; j < S; ++j) Z[j + 1] = propagate(j, Z[j]);

  const double theta = cfg.contraction_target;
  double prev_diff = -1.0;
  double observed = 0.0;
  std::vector<Vector> gR(S), gL(S + 1);
  std::vector<Vector> next(S + 1);
  WindowDiagnostics& dg = out.diagnostics;

  for (int it = 1; it <= cfg.max_picard_iters; ++it) {
    for (std::size_t j = 0; j <= S; ++j) {
      if (j < S) gR[j] = eval_g(Z[j], steps[j].u);
      if (j > 0) {
        const Vector& ul = steps[j - 1].u;
        const bool same = j < S && (sys.f().input_free || (in.poly != nullptr) || ul == steps[j].u);
        gL[j] = same ? gR[j] : eval_g(Z[j], in.poly ? in.value(out.nodes[j]) : ul);
      }
    }
    next[0] = Z[0];
    double diff = 0.0;
    double scale = next[0].norm();
    for (std::size_t j = 0; j < S; ++j) {
      Vector forcing;
      if (diag) {
        forcing = steps[j].W0.cwiseProduct(gR[j]) + steps[j].W1.cwiseProduct(gL[j + 1] - gR[j]);
        if (analytic) forcing = forcing.cwiseProduct(wts);
      } else {
        const auto& si = dense_cache[static_cast<std::size_t>(steps[j].dense_index)];
        forcing = si.W0 * gR[j] + si.W1 * (gL[j + 1] - gR[j]);
      }
      next[j + 1] = propagate(j, next[j]) + forcing + steps[j].lin;
      diff = std::max(diff, (next[j + 1] - Z[j + 1]).norm());
      scale = std::max(scale, next[j + 1].norm());
    }
    std::swap(Z, next);
    dg.iterations = it;
    dg.fixed_point_residual = diff;

    if (!std::isfinite(scale) || !std::isfinite(diff)) {
      out.status = TrajectoryStatus::blowup;
      break;
    }
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale);
    if (prev_diff > floor) observed = std::max(observed, diff / prev_diff);
    prev_diff = diff;
    if (diff <= cfg.picard_tol * std::max(1.0, scale)) break;
    if (it == cfg.max_picard_iters) {
      out.status = TrajectoryStatus::failed;
      out.failure_reason = "picard divergence";
    }
  }
  dg.observed_contraction = observed;
  (void)theta;

  out.states.reserve(S + 1);
  for (std::size_t j = 0; j <= S; ++j) {
    const double nz = Z[j].norm();
    if (out.status != TrajectoryStatus::failed && (!std::isfinite(nz) || nz > cfg.blowup_threshold)) {
      out.status = TrajectoryStatus::blowup;
      out.blowup_node = out.nodes[j];
      break;
    }
    out.states.emplace_back(Z[j]);
  }
  if (out.status == TrajectoryStatus::blowup && std::isnan(out.blowup_node)) out.blowup_node = out.nodes.back();
  return out;
}

Trajectory run(const EvolutionSystem& sys, const SpectralState& x0, const InputSignal* pc,
               const PolynomialSignal* poly, double t_end, const SolverConfig& cfg) {
  cfg.validate();
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (x0.size() != sys.size()) throw std::invalid_argument("initial state has the wrong size");
  if (!x0.finite()) throw std::invalid_argument("initial state must be finite");
  if (pc) {
    if (pc->dim() != sys.input_dim()) throw std::invalid_argument("input dimension does not match B");
    if (pc->horizon() < t_end * (1.0 - 1e-14)) throw std::invalid_argument("input shorter than t_end");
  } else {
    if (poly->dim() != sys.input_dim()) throw std::invalid_argument("input dimension does not match B");
    if (!sys.diagonal()) throw std::invalid_argument("polynomial inputs need a diagonal generator");
  }

  const bool analytic = sys.weights().size() != 0;
  // states driven through a waived input channel leave X_alpha on the ladder,
  // so restarts from reached states must be admitted
  if (analytic && !sys.irregular_input()) {
    std::vector<double> terms(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) {
      const double v = sys.weights()(static_cast<Eigen::Index>(i)) * x0[i];
      terms[i] = v * v;
    }
    if (!series_ladder(terms).bounded) throw std::domain_error("initial state not in X_alpha");
  }

  Engine eng(sys);
  std::vector<double> checkpoints;
  for (double c : cfg.checkpoints)
    if (c > 0.0 && c < t_end) checkpoints.push_back(c);
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  std::size_t next_cp = 0;

  Trajectory tr;
  tr.alpha = sys.alpha();
  if (analytic) tr.alpha_weights = sys.weights();
  const Vector& wts = sys.weights();
  auto to_x = [&](const SpectralState& z) { return analytic ? SpectralState(z.coeffs().cwiseQuotient(wts)) : z; };

  SpectralState w = analytic ? SpectralState(x0.coeffs().cwiseProduct(wts)) : x0;
  tr.times.push_back(0.0);
  tr.states.push_back(x0);
  tr.window_boundaries.push_back(0.0);

  double t = 0.0;
  while (t < t_end) {
    while (next_cp < checkpoints.size() && checkpoints[next_cp] <= t) ++next_cp;
    double target = std::min(t_end, t + cfg.max_window);
    if (next_cp < checkpoints.size()) target = std::min(target, checkpoints[next_cp]);
    const double cap = target - t;

    InputView in{pc, poly, t};
    const double u_sup = in.sup(0.0, cap);
    const double r = w.coeffs().norm();
    const StepSelection sel = eng.select(r, u_sup, cfg, cap);
    if (sel.outcome == StepSelection::Outcome::below_min_window) {
      tr.status = TrajectoryStatus::blowup;
      tr.blowup_time = t;
      return tr;
    }
    if (sel.outcome == StepSelection::Outcome::exhausted) {
      tr.status = TrajectoryStatus::failed;
      tr.failure_reason = "step selection exhausted";
      return tr;
    }
    const double t_next = sel.t1 == cap ? target : t + sel.t1;
    WindowSolution ws = run_window(eng, w, in, t_next - t, cfg);

    WindowDiagnostics dg = ws.diagnostics;
    dg.t_start = t;
    dg.width = t_next - t;
    dg.K = sel.K;
    dg.lipschitz = sel.lipschitz;
    dg.kernel = sel.kernel;
    dg.h = sel.h;
    dg.contraction_bound = sel.kernel * sel.lipschitz;
    tr.windows.push_back(dg);

    const std::size_t last = ws.states.size();
    for (std::size_t j = 1; j < last; ++j) {
      const bool boundary = j + 1 == ws.nodes.size();
      if (!cfg.record_substeps && !boundary) continue;
      tr.times.push_back(boundary ? t_next : t + ws.nodes[j]);
      tr.states.push_back(to_x(ws.states[j]));
    }
    if (ws.status == TrajectoryStatus::failed) {
      tr.status = TrajectoryStatus::failed;
      tr.failure_reason = ws.failure_reason;
      return tr;
    }
    if (ws.status == TrajectoryStatus::blowup) {
      tr.status = TrajectoryStatus::blowup;
      tr.blowup_time = ws.blowup_node == ws.nodes.back() ? t_next : t + ws.blowup_node;
      return tr;
    }
    w = ws.states.back();
    t = t_next;
    tr.window_boundaries.push_back(t);
  }
  return tr;
}

}  // namespace

StepSelection select_step(const EvolutionSystem& sys, double start_norm, double u_sup, const SolverConfig& cfg,
                          double cap) {
  cfg.validate();
  return Engine(sys).select(start_norm, u_sup, cfg, cap);
}

double kernel_bound(const EvolutionSystem& sys, double t) { return Engine(sys).kernel(t); }

double input_bound(const EvolutionSystem& sys, double t) { return Engine(sys).input_h(t); }

double certified_window(const EvolutionSystem& sys, double lipschitz, double theta, double cap) {
  Engine eng(sys);
  double t = cap;
  for (int i = 0; i < 200; ++i) {
    if (eng.kernel(t) * lipschitz <= theta) return t;
    t *= 0.5;
  }
  throw std::runtime_error("no certified window found");
}

WindowSolution picard_window(const EvolutionSystem& sys, const SpectralState& w, const InputSignal& u, double t1,
                             const SolverConfig& cfg) {
  cfg.validate();
  if (!(t1 > 0.0)) throw std::invalid_argument("window length must be positive");
  if (u.horizon() < t1 * (1.0 - 1e-14)) throw std::invalid_argument("input shorter than window");
  Engine eng(sys);
  InputView in{&u, nullptr, 0.0};
  WindowSolution ws = run_window(eng, w, in, t1, cfg);
  ws.diagnostics.width = t1;
  return ws;
}

Trajectory solve(const EvolutionSystem& sys, const SpectralState& x0, const InputSignal& u, double t_end,
                 const SolverConfig& cfg) {
  if (sys.mode() == SystemMode::analytic) throw std::invalid_argument("use solve_analytic for analytic systems");
  return run(sys, x0, &u, nullptr, t_end, cfg);
}

Trajectory solve(const EvolutionSystem& sys, const SpectralState& x0, const PolynomialSignal& u, double t_end,
                 const SolverConfig& cfg) {
  return run(sys, x0, nullptr, &u, t_end, cfg);
}

Trajectory solve_analytic(const EvolutionSystem& sys, const SpectralState& x0, const InputSignal& u, double t_end,
                          const SolverConfig& cfg) {
  if (sys.mode() != SystemMode::analytic) throw std::invalid_argument("solve_analytic needs an analytic system");
  return run(sys, x0, &u, nullptr, t_end, cfg);
}

Trajectory solve_system(const EvolutionSystem& sys, const SpectralState& x0, const InputSignal& u, double t_end,
                        const SolverConfig& cfg) {
  return run(sys, x0, &u, nullptr, t_end, cfg);
}

double global_bound(const EvolutionSystem& sys, double x0_norm, double u_norm, double t, double theta) {
  if (!sys.f().global_lipschitz) throw std::invalid_argument("no global Lipschitz certificate declared");
  if (t < 0.0 || x0_norm < 0.0 || u_norm < 0.0) throw std::invalid_argument("global_bound needs nonnegative data");
  Engine eng(sys);
  const double L = *sys.f().global_lipschitz;
  const double t1 = certified_window(sys, L, theta, 1.0);
  const auto windows = static_cast<long>(std::ceil(t / t1 - 1e-12));
  const double grow = sys.M() * std::exp(sys.lambda() * t1);
  const double forcing = eng.input_h(t1) * u_norm + eng.kernel(t1) * eng.f0_bound(u_norm);
  double b = x0_norm;
  for (long k = 0; k < windows; ++k) b = 2.0 * (grow * b + forcing);
  return b;
}

}  // namespace mildflow
