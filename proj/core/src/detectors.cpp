#include "anpid/detectors.hpp"

#include <array>
#include <limits>
#include <string>

#include "anpid/damping.hpp"
#include "anpid/error.hpp"

namespace anpid {

namespace {

constexpr std::array kAlgorithms = {
    Algorithm::zf,        Algorithm::lmmse,   Algorithm::mlsd,     Algorithm::mfb,
    Algorithm::jacobi,    Algorithm::gs,      Algorithm::ssor,     Algorithm::jacobi_dd,
    Algorithm::gs_dd,     Algorithm::ssor_dd, Algorithm::ngs_dd,   Algorithm::nssor_dd,
    Algorithm::anpid_gs,  Algorithm::anpid_ssor,
};

// b - A s, skipping the product when s is identically zero (the t = 1 case
// for every method started from the origin).
ComplexVector residual(const ComplexMatrix& A, std::span<const Complex> b,
                       std::span<const Complex> s, MultiplyTally* t) {
  ComplexVector r(std::vector<Complex>(b.begin(), b.end()));
  if (is_zero(s)) return r;
  const ComplexVector As = multiply(A, s, t);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= As[i];
  return r;
}

ComplexVector add(std::span<const Complex> a, const ComplexVector& b) {
  ComplexVector out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

void check_system(const ComplexMatrix& A, std::span<const Complex> b) {
  if (!A.square() || A.rows() == 0) throw Error(ErrorCode::shape, "system matrix must be square");
  if (b.size() != A.rows()) throw Error(ErrorCode::shape, "b length mismatch");
}

void check_channel(const ComplexMatrix& H, std::span<const Complex> y, std::size_t n) {
  if (H.cols() != n) throw Error(ErrorCode::shape, "H column count differs from system size");
  if (y.size() != H.rows()) throw Error(ErrorCode::shape, "y length mismatch");
}

DetectorResult single_shot(ComplexVector estimate, SymbolVector decision) {
  DetectorResult out;
  out.decision = decision;
  out.trace.push_back({std::move(estimate), std::move(decision), {}, std::nullopt, 0});
  return out;
}

void finish(DetectorResult& out) {
  out.multiply_count = 0;
  for (const auto& rec : out.trace) out.multiply_count += rec.multiplies;
  if (!out.trace.empty()) out.decision = out.trace.back().decision;
}

PreconditionerKind kind_of(Algorithm a) {
  switch (a) {
    case Algorithm::jacobi:
    case Algorithm::jacobi_dd: return PreconditionerKind::jacobi;
    case Algorithm::gs:
    case Algorithm::gs_dd:
    case Algorithm::ngs_dd: return PreconditionerKind::gs;
    default: return PreconditionerKind::ssor;
  }
}

}  // namespace

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::zf: return "zf";
    case Algorithm::lmmse: return "lmmse";
    case Algorithm::mlsd: return "mlsd";
    case Algorithm::mfb: return "mfb";
    case Algorithm::jacobi: return "jacobi";
    case Algorithm::gs: return "gs";
    case Algorithm::ssor: return "ssor";
    case Algorithm::jacobi_dd: return "jacobi_dd";
    case Algorithm::gs_dd: return "gs_dd";
    case Algorithm::ssor_dd: return "ssor_dd";
    case Algorithm::ngs_dd: return "ngs_dd";
    case Algorithm::nssor_dd: return "nssor_dd";
    case Algorithm::anpid_gs: return "anpid_gs";
    case Algorithm::anpid_ssor: return "anpid_ssor";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
  for (const Algorithm a : kAlgorithms) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

std::span<const Algorithm> all_algorithms() noexcept { return kAlgorithms; }

bool is_iterative(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::zf:
    case Algorithm::lmmse:
    case Algorithm::mlsd:
    case Algorithm::mfb: return false;
    default: return true;
  }
}

std::string_view to_string(DampingMode m) noexcept {
  return m == DampingMode::fixed ? "fixed" : "per_iteration";
}

std::optional<DampingMode> parse_damping_mode(std::string_view name) noexcept {
  if (name == "fixed") return DampingMode::fixed;
  if (name == "per_iteration") return DampingMode::per_iteration;
  return std::nullopt;
}

void DetectorConfig::validate() const {
  if (iterations < 1) throw Error(ErrorCode::invalid_argument, "iterations must be >= 1");
  if (algorithm == Algorithm::anpid_gs || algorithm == Algorithm::anpid_ssor) {
    if (stage_a_iterations < 1 || stage_a_iterations > iterations) {
      throw Error(ErrorCode::invalid_argument, "stage_a_iterations must lie in [1, iterations]");
    }
  }
  if (rho && !(*rho >= 0.0)) throw Error(ErrorCode::invalid_argument, "rho must be >= 0");
}

double resolve_rho(const DetectorConfig& cfg, double sigma_v2) noexcept {
  if (cfg.rho) return *cfg.rho;
  switch (cfg.algorithm) {
    case Algorithm::lmmse:
    case Algorithm::jacobi:
    case Algorithm::gs:
    case Algorithm::ssor: return sigma_v2;
    default: return 0.0;
  }
}

DetectorResult zf_lmmse(const ComplexMatrix& H, std::span<const Complex> y, double rho,
                        const Constellation& c) {
  const GramSystem sys = gram_and_matched_filter(H, y, rho);
  ComplexVector s = exact_solve(sys.A, sys.b.span());
  SymbolVector x = slice(s.span(), c);
  return single_shot(std::move(s), std::move(x));
}

SymbolVector mlsd_bruteforce(const ComplexMatrix& H, std::span<const Complex> y,
                             const Constellation& c) {
  const std::size_t M = H.rows();
  const std::size_t N = H.cols();
  if (N == 0 || y.size() != M) throw Error(ErrorCode::shape, "mlsd: H/y mismatch");
  constexpr double kLimit = 1u << 20;
  double space = 1.0;
  for (std::size_t n = 0; n < N; ++n) {
    space *= c.order();
    if (space > kLimit) {
      throw Error(ErrorCode::intractable, std::to_string(c.order()) + "^" + std::to_string(N) +
                                              " candidates exceed 2^20");
    }
  }

  const std::size_t K = c.order();
  // h_n * p_k for every stream and point, each an M-vector.
  std::vector<Complex> contrib(N * K * M);
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t k = 0; k < K; ++k) {
      Complex* dst = &contrib[(n * K + k) * M];
      const Complex p = c.point(k);
      for (std::size_t m = 0; m < M; ++m) dst[m] = cmul(H(m, n), p);
    }
  }

  // Depth-first over streams; level n holds y - sum_{j<n} h_j x_j.
  std::vector<Complex> partial((N + 1) * M);
  std::copy(y.begin(), y.end(), partial.begin());
  std::vector<std::uint32_t> choice(N, 0);
  std::vector<std::uint32_t> best(N, 0);
  double best_metric = std::numeric_limits<double>::infinity();

  std::size_t level = 0;
  choice[0] = 0;
  while (true) {
    // Descend: apply choice[level] and move down.
    const Complex* from = &partial[level * M];
    Complex* to = &partial[(level + 1) * M];
    const Complex* h = &contrib[(level * K + choice[level]) * M];
    for (std::size_t m = 0; m < M; ++m) to[m] = from[m] - h[m];
    if (level + 1 == N) {
      const double metric = norm_squared({to, M});
      if (metric < best_metric) {
        best_metric = metric;
        best = choice;
      }
      // Advance the odometer, backing up through exhausted levels.
      while (true) {
        if (++choice[level] < K) break;
        choice[level] = 0;
        if (level == 0) return from_indices(best, c);
        --level;
      }
    } else {
      ++level;
      choice[level] = 0;
    }
  }
}

SymbolVector mfb_bound(const ComplexMatrix& H, std::span<const Complex> x_true,
                       std::span<const Complex> v, const Constellation& c) {
  if (x_true.size() != H.cols() || v.size() != H.rows()) {
    throw Error(ErrorCode::shape, "mfb: dimension mismatch");
  }
  const ComplexVector z = adjoint_multiply(H, v);
  ComplexVector s(H.cols());
  for (std::size_t n = 0; n < H.cols(); ++n) {
    const double energy = norm_squared(H.column(n));
    if (energy == 0.0) {
      throw Error(ErrorCode::degenerate_column, "column " + std::to_string(n) + " of H is zero");
    }
    s[n] = x_true[n] + z[n] / energy;
  }
  return slice(s.span(), c);
}

DetectorResult si_iterate(const ComplexMatrix& A, std::span<const Complex> b,
                          const Preconditioner& precond, std::span<const Complex> s0,
                          std::size_t T, const Constellation& c) {
  check_system(A, b);
  if (s0.size() != A.rows()) throw Error(ErrorCode::shape, "s0 length mismatch");
  DetectorResult out;
  ComplexVector s(std::vector<Complex>(s0.begin(), s0.end()));
  for (std::size_t t = 1; t <= T; ++t) {
    MultiplyTally it;
    const ComplexVector r = residual(A, b, s.span(), &it);
    s = add(s.span(), precond.apply(r.span(), &it));
    SymbolVector x = slice(s.span(), c);
    out.trace.push_back({s, std::move(x), {}, std::nullopt, it.count});
  }
  finish(out);
  return out;
}

DetectorResult dd_iterate(const ComplexMatrix& A, std::span<const Complex> b,
                          const ComplexMatrix& H, std::span<const Complex> y,
                          const Preconditioner& precond, const Constellation& c, std::size_t T,
                          DampingMode mode) {
  check_system(A, b);
  check_channel(H, y, A.rows());
  DetectorResult out;
  ComplexVector d(A.rows());
  double frozen = 0.0;
  for (std::size_t t = 1; t <= T; ++t) {
    MultiplyTally it;
    const ComplexVector r = residual(A, b, d.span(), &it);
    ComplexVector s = add(d.span(), precond.apply(r.span(), &it));
    SymbolVector x = slice(s.span(), c);
    double omega = frozen;
    if (t == 1 || mode == DampingMode::per_iteration) {
      omega = optimal_damping(H, y, x.symbols.span(), d.span(), &it);
      if (t == 1) frozen = omega;
    }
    d = damp(d.span(), x.symbols.span(), omega, &it);
    out.trace.push_back({std::move(s), std::move(x), d, omega, it.count});
  }
  finish(out);
  return out;
}

DetectorResult anpid(const ComplexMatrix& A, std::span<const Complex> b, const ComplexMatrix& H,
                     std::span<const Complex> y, const Constellation& c, AnpidVariant variant,
                     std::size_t stage_a, std::size_t stage_b) {
  check_system(A, b);
  check_channel(H, y, A.rows());
  if (stage_a < 1) throw Error(ErrorCode::invalid_argument, "stage A needs at least one iteration");

  DetectorResult out;
  MultiplyTally setup;
  const auto kind = variant == AnpidVariant::gs ? PreconditionerKind::gs : PreconditionerKind::ssor;
  const Preconditioner normalized = normalized_preconditioner(A, kind, &setup);
  const Preconditioner jacobi = Preconditioner::build(A, PreconditionerKind::jacobi);
  out.setup_multiplies = setup.count;

  const std::size_t n = A.rows();
  ComplexVector d(n);
  double zeta_a = 0.0;
  double zeta_b = 0.0;

  // t = 1: d_0 = 0, so s_1 = Theta b; both fixed damping factors come from
  // first decisions of their own preconditioner.
  {
    MultiplyTally it;
    ComplexVector s = normalized.apply(b, &it);
    SymbolVector x = slice(s.span(), c);
    zeta_a = fixed_damping(H, y, x.symbols.span(), &it);
    const SymbolVector x_jac = slice(jacobi.apply(b, &it).span(), c);
    zeta_b = fixed_damping(H, y, x_jac.symbols.span(), &it);
    d = damp(d.span(), x.symbols.span(), zeta_a, &it);
    out.trace.push_back({std::move(s), std::move(x), d, zeta_a, it.count});
  }

  const auto step = [&](const Preconditioner& theta, double zeta) {
    MultiplyTally it;
    const ComplexVector r = residual(A, b, d.span(), &it);
    ComplexVector s = add(d.span(), theta.apply(r.span(), &it));
    SymbolVector x = slice(s.span(), c);
    d = damp(d.span(), x.symbols.span(), zeta, &it);
    out.trace.push_back({std::move(s), std::move(x), d, zeta, it.count});
  };
  for (std::size_t t = 2; t <= stage_a; ++t) step(normalized, zeta_a);
  for (std::size_t t = 1; t <= stage_b; ++t) step(jacobi, zeta_b);

  finish(out);
  return out;
}

DetectorResult detect(const DetectorConfig& cfg, const DetectionInput& in) {
  cfg.validate();
  const double rho = resolve_rho(cfg, in.sigma_v2);
  const ComplexMatrix regularized = rho == 0.0 ? ComplexMatrix{} : add_to_diagonal(in.gram, rho);
  const ComplexMatrix& A = rho == 0.0 ? in.gram : regularized;
  const Constellation& c = in.constellation;
  const std::size_t T = cfg.iterations;

  switch (cfg.algorithm) {
    case Algorithm::zf:
    case Algorithm::lmmse: {
      ComplexVector s = exact_solve(A, in.b);
      SymbolVector x = slice(s.span(), c);
      return single_shot(std::move(s), std::move(x));
    }
    case Algorithm::mlsd: {
      SymbolVector x = mlsd_bruteforce(in.H, in.y, c);
      ComplexVector s = x.symbols;
      return single_shot(std::move(s), std::move(x));
    }
    case Algorithm::mfb: {
      if (in.x_true.empty() || in.noise.empty()) {
        throw Error(ErrorCode::invalid_argument, "mfb needs the transmitted symbols and noise");
      }
      SymbolVector x = mfb_bound(in.H, in.x_true, in.noise, c);
      ComplexVector s = x.symbols;
      return single_shot(std::move(s), std::move(x));
    }
    case Algorithm::jacobi:
    case Algorithm::gs:
    case Algorithm::ssor: {
      const ComplexVector s0(A.rows());
      return si_iterate(A, in.b, Preconditioner::build(A, kind_of(cfg.algorithm)), s0.span(), T,
                        c);
    }
    case Algorithm::jacobi_dd:
    case Algorithm::gs_dd:
    case Algorithm::ssor_dd:
      return dd_iterate(A, in.b, in.H, in.y, Preconditioner::build(A, kind_of(cfg.algorithm)), c,
                        T, cfg.damping);
    case Algorithm::ngs_dd:
    case Algorithm::nssor_dd: {
      MultiplyTally setup;
      const Preconditioner p = normalized_preconditioner(A, kind_of(cfg.algorithm), &setup);
      DetectorResult out = dd_iterate(A, in.b, in.H, in.y, p, c, T, cfg.damping);
      out.setup_multiplies = setup.count;
      return out;
    }
    case Algorithm::anpid_gs:
    case Algorithm::anpid_ssor: {
      const auto variant =
          cfg.algorithm == Algorithm::anpid_gs ? AnpidVariant::gs : AnpidVariant::ssor;
      return anpid(A, in.b, in.H, in.y, c, variant, cfg.stage_a_iterations,
                   T - cfg.stage_a_iterations);
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown algorithm");
}

}  // namespace anpid
