#include "kitaev/abelian_qft.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <tuple>

#include "kitaev/errors.hpp"
#include "kitaev/reversible.hpp"
#include "kitaev/shot_statistics.hpp"
#include "kitaev/state_vector.hpp"

namespace kitaev {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int bits_for(std::uint64_t q) {
  int m = 0;
  while ((std::uint64_t{1} << m) < q) ++m;
  return m;
}

Register tail(const Register& r, std::size_t from) { return Register(r.begin() + static_cast<std::ptrdiff_t>(from), r.end()); }

void add_maybe_controlled(OperationSequence& seq, Gate g, const Register& controls, std::uint64_t trigger,
                          const Register& target) {
  if (controls.empty()) {
    seq.add(std::move(g), target);
  } else {
    seq.add(Gate::controlled(std::move(g), static_cast<int>(controls.size()), trigger), concat(controls, target));
  }
}

void psi_rec(OperationSequence& seq, std::uint64_t q, const Register& r, const Register& controls,
             std::uint64_t trigger, int theta_bits) {
  if (q <= 1) return;
  const int m = bits_for(q);
  if (m > static_cast<int>(r.size())) throw InvalidArgument("prepare_psi_q0: register too narrow for q");
  // values < q live in the low m qubits
  const Register sub = tail(r, r.size() - static_cast<std::size_t>(m));
  if (std::has_single_bit(q)) {
    for (QubitId t : sub) add_maybe_controlled(seq, Gate(gates::Unitary1{s_matrix()}), controls, trigger, {t});
    return;
  }
  const std::uint64_t q0 = std::uint64_t{1} << (m - 1), q1 = q - q0;
  const double theta = std::acos(std::sqrt(static_cast<double>(q0) / static_cast<double>(q)));
  append_rotation(seq, quantize_angle(theta, theta_bits), theta_bits, sub[0], controls, trigger);
  const Register c2 = concat(controls, {sub[0]});
  const Register rest = tail(sub, 1);
  psi_rec(seq, q0, rest, c2, trigger << 1, theta_bits);
  psi_rec(seq, q1, rest, c2, (trigger << 1) | 1U, theta_bits);
}

}  // namespace

CyclicGroupSpec CyclicGroupSpec::make(std::uint64_t q) {
  if (q < 1) throw InvalidArgument("CyclicGroupSpec: q must be positive");
  if (q > (std::uint64_t{1} << 20)) throw InvalidArgument("CyclicGroupSpec: q too large");
  return CyclicGroupSpec{q, std::max(1, bits_for(q))};
}

qlinalg::Vector psi_vector(const CyclicGroupSpec& spec, std::uint64_t a) {
  qlinalg::Vector v = qlinalg::Vector::Zero(Eigen::Index{1} << spec.n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(spec.q));
  for (std::uint64_t b = 0; b < spec.q; ++b) {
    const std::uint64_t ab = (a % spec.q) * b % spec.q;
    v(static_cast<Eigen::Index>(b)) = std::polar(norm, kTwoPi * static_cast<double>(ab) / static_cast<double>(spec.q));
  }
  return v;
}

void append_psi_q0(OperationSequence& seq, std::uint64_t q, const Register& r, int theta_bits) {
  psi_rec(seq, q, r, {}, 0, theta_bits);
}

OperationSequence prepare_psi_q0(const CyclicGroupSpec& spec, int theta_bits) {
  OperationSequence seq;
  seq.memory_size = spec.n;
  seq.input_register = seq.output_register = make_register(0, spec.n);
  append_psi_q0(seq, spec.q, seq.input_register, theta_bits);
  return seq;
}

void append_u_q(OperationSequence& seq, const CyclicGroupSpec& spec, const Register& a, const Register& b) {
  const int n = spec.n;
  if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n) {
    throw DimensionMismatch("u_q_phase: registers must have n qubits");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int e = (n - 1 - i) + (n - 1 - j);
      std::uint64_t w = 1 % spec.q;
      for (int t = 0; t < e; ++t) w = (2 * w) % spec.q;
      const double phi = kTwoPi * static_cast<double>(w) / static_cast<double>(spec.q);
      seq.add(Gate::controlled(Gate::phase(phi)), {a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]});
    }
  }
}

OperationSequence u_q_phase(const CyclicGroupSpec& spec) {
  OperationSequence seq;
  seq.memory_size = 2 * spec.n;
  seq.input_register = seq.output_register = make_register(0, 2 * spec.n);
  append_u_q(seq, spec, make_register(0, spec.n), make_register(spec.n, spec.n));
  return seq;
}

void append_t_q(OperationSequence& seq, const CyclicGroupSpec& spec, const Register& a, const Register& b,
                int theta_bits) {
  append_psi_q0(seq, spec.q, b, theta_bits);
  append_u_q(seq, spec, a, b);
}

OperationSequence t_q(const CyclicGroupSpec& spec, int theta_bits) {
  OperationSequence seq;
  seq.memory_size = 2 * spec.n;
  seq.input_register = seq.output_register = make_register(0, 2 * spec.n);
  append_t_q(seq, spec, make_register(0, spec.n), make_register(spec.n, spec.n), theta_bits);
  return seq;
}

std::optional<std::uint64_t> decode_cycle_phase(const RationalPhase& phi, std::uint64_t q) {
  if (phi.q == 0 || q % phi.q != 0) return std::nullopt;
  const std::uint64_t v = (phi.p % phi.q) * (q / phi.q);
  return (q - v) % q;
}

double QqStatistics::error(std::uint64_t a) const {
  double ok = p.at(a).at(a);
  if (a == 0) ok += fail[a];
  return std::max(0.0, 1.0 - ok);
}

double QqStatistics::max_error() const {
  double e = 0.0;
  for (std::uint64_t a = 0; a < p.size(); ++a) e = std::max(e, error(a));
  return e;
}

QqStatistics q_q_statistics(const CyclicGroupSpec& spec, int shots, int retries) {
  if (shots < 1 || retries < 0) throw InvalidArgument("q_q_statistics: bad shot or retry count");
  QqStatistics st;
  st.shots = shots;
  st.p.assign(spec.q, std::vector<double>(spec.q, 0.0));
  st.fail.assign(spec.q, 0.0);
  for (std::uint64_t a = 0; a < spec.q; ++a) {
    // shift eigenvalue exp(-2πi a/q)
    const RationalPhase phi = RationalPhase::make(-static_cast<std::int64_t>(a), static_cast<std::int64_t>(spec.q));
    const ExactPhaseDistribution d = exact_phase_distribution(phi, spec.n, shots);
    std::vector<double> p1(spec.q, 0.0);
    double f1 = d.failure;
    for (const auto& [ph, pr] : d.outcomes) {
      if (const auto c = decode_cycle_phase(ph, spec.q)) {
        p1[*c] += pr;
      } else {
        f1 += pr;
      }
    }
    double geo = 0.0, fpow = 1.0;
    for (int t = 0; t <= retries; ++t) {
      geo += fpow;
      fpow *= f1;
    }
    for (std::uint64_t c = 0; c < spec.q; ++c) st.p[a][c] = p1[c] * geo;
    st.fail[a] = fpow;
  }
  return st;
}

namespace {

// q_q statistics are pure functions of (q, shots)
const QqStatistics& cached_statistics(const CyclicGroupSpec& spec, int shots) {
  static std::map<std::pair<std::uint64_t, int>, QqStatistics> cache;
  const auto key = std::make_pair(spec.q, shots);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, q_q_statistics(spec, shots)).first;
  return it->second;
}

}  // namespace

int q_q_shots(const CyclicGroupSpec& spec, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("q_q: eps must lie in (0, 1)");
  int hi = shots_per_level(2 * spec.n + 1, eps);
  while (cached_statistics(spec, hi).max_error() > eps) {
    if (hi > (1 << 14)) throw Error("q_q: shot search did not converge");
    hi *= 2;
  }
  int lo = 0;  // invariant: lo fails (or is zero), hi succeeds
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (cached_statistics(spec, mid).max_error() <= eps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

QqOperator::QqOperator(const CyclicGroupSpec& spec, QqStatistics stats) : spec_(spec), stats_(std::move(stats)) {
  if (stats_.p.size() != spec.q) throw DimensionMismatch("QqOperator: statistics do not match q");
  const std::size_t dg = std::size_t{1} << (spec.n + 1);
  for (std::uint64_t a = 0; a < spec.q; ++a) {
    std::vector<double> eta(dg, 0.0);
    double s = 0.0;
    for (std::uint64_t c = 0; c < spec.q; ++c) {
      eta[c + 1] = std::sqrt(std::max(0.0, stats_.p[a][c]));
      s += eta[c + 1] * eta[c + 1];
    }
    eta[spec.q + 1] = std::sqrt(std::max(0.0, stats_.fail[a]));
    s += eta[spec.q + 1] * eta[spec.q + 1];
    if (s <= 0.0) throw Error("QqOperator: empty outcome distribution");
    for (double& x : eta) x /= std::sqrt(s);
    eta_.push_back(std::move(eta));
  }
}

void QqOperator::apply(std::span<Complex> block) const {
  using RowMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const int n = spec_.n;
  const auto q = static_cast<Eigen::Index>(spec_.q);
  const Eigen::Index dy = Eigen::Index{1} << n, dg = Eigen::Index{1} << (n + 1), inner = dy * dg;
  if (static_cast<Eigen::Index>(block.size()) != (Eigen::Index{1} << n) * inner) {
    throw DimensionMismatch("QqOperator: block size");
  }
  Eigen::Map<RowMatrix> v(block.data(), Eigen::Index{1} << n, inner);
  RowMatrix f(q, q);
  const double norm = 1.0 / std::sqrt(static_cast<double>(spec_.q));
  for (Eigen::Index a = 0; a < q; ++a)
    for (Eigen::Index x = 0; x < q; ++x)
      f(a, x) = std::polar(norm, -kTwoPi * static_cast<double>((a * x) % q) / static_cast<double>(q));
  RowMatrix c = f * v.topRows(q);
  std::vector<Complex> tmp(static_cast<std::size_t>(inner));
  for (Eigen::Index a = 0; a < q; ++a) {
    const auto& eta = eta_[static_cast<std::size_t>(a)];
    Complex* row = c.row(a).data();
    // H_a = I - w w^T with w = (e_0 - η)/... , ‖e_0 - η‖² = 2
    auto reflect = [&](Complex* g) {
      Complex dot = g[0];
      for (Eigen::Index k = 1; k < dg; ++k) dot -= eta[static_cast<std::size_t>(k)] * g[k];
      g[0] -= dot;
      for (Eigen::Index k = 1; k < dg; ++k) g[k] += dot * eta[static_cast<std::size_t>(k)];
    };
    for (Eigen::Index y = 0; y < dy; ++y) reflect(row + y * dg);
    for (Eigen::Index y = 0; y < dy; ++y) {
      for (Eigen::Index g = 0; g < dg; ++g) {
        Eigen::Index y2 = y;
        if (g >= 1 && g <= q) y2 = y ^ (g - 1);
        tmp[static_cast<std::size_t>(y2 * dg + g)] = row[y * dg + g];
      }
    }
    std::copy(tmp.begin(), tmp.end(), row);
    for (Eigen::Index y = 0; y < dy; ++y) reflect(row + y * dg);
  }
  v.topRows(q) = f.adjoint() * c;
}

std::shared_ptr<const BlockOperator> QqOperator::inverse() const { return std::make_shared<QqOperator>(*this); }

std::string QqOperator::name() const { return "Q_" + std::to_string(spec_.q); }

Gate q_q(const CyclicGroupSpec& spec, double eps) {
  const int s = q_q_shots(spec, eps);
  return Gate::block(std::make_shared<QqOperator>(spec, cached_statistics(spec, s)));
}

QftProgram qft_abelian(const std::vector<CyclicGroupSpec>& specs, double eps) {
  if (specs.empty()) throw InvalidArgument("qft_abelian: need at least one factor");
  QftProgram prog;
  prog.eps = eps;
  int off = 0;
  for (const auto& sp : specs) off += 3 * sp.n + 1;
  if (off > kMaxQubits) throw QubitBudgetExceeded("qft: program needs " + std::to_string(off) + " qubits");
  prog.seq.memory_size = off;
  off = 0;
  for (const auto& sp : specs) {
    if (sp.q < 2 || (std::uint64_t{1} << sp.n) < sp.q) throw InvalidArgument("qft: need 2 <= q <= 2^n");
    QftFactor f;
    f.spec = sp;
    f.x = make_register(off, sp.n);
    f.y = make_register(off + sp.n, sp.n);
    f.g = make_register(off + 2 * sp.n, sp.n + 1);
    off += 3 * sp.n + 1;
    f.shots = q_q_shots(sp, eps);
    append_tau_n(prog.seq, f.x, f.y);
    append_tau_n(prog.seq, f.y, f.x);
    append_t_q(prog.seq, sp, f.y, f.x);
    const Gate qq = Gate::block(std::make_shared<QqOperator>(sp, cached_statistics(sp, f.shots)));
    prog.seq.add(qq.inverse(), concat(concat(f.x, f.y), f.g));
    prog.x = concat(prog.x, f.x);
    prog.factors.push_back(std::move(f));
  }
  prog.seq.input_register = prog.seq.output_register = prog.x;
  prog.seq.validate();
  return prog;
}

QftProgram qft(const CyclicGroupSpec& spec, double eps) { return qft_abelian({spec}, eps); }

qlinalg::Vector product_psi(const std::vector<CyclicGroupSpec>& specs, const std::vector<std::uint64_t>& a) {
  if (specs.size() != a.size()) throw DimensionMismatch("product_psi: one value per factor");
  qlinalg::Vector v = qlinalg::Vector::Ones(1);
  for (std::size_t i = 0; i < specs.size(); ++i) v = qlinalg::tensor(v, psi_vector(specs[i], a[i]));
  return v;
}

QftColumn qft_column(const QftProgram& prog, const std::vector<std::uint64_t>& a, int qubit_cap) {
  if (a.size() != prog.factors.size()) throw DimensionMismatch("qft_column: one value per factor");
  StateVector s(prog.memory(), qubit_cap);
  std::vector<CyclicGroupSpec> specs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= prog.factors[i].spec.q) throw InvalidArgument("qft_column: input outside Z_q");
    s.set_register(prog.factors[i].x, a[i]);
    specs.push_back(prog.factors[i].spec);
  }
  run_in_place(s, prog.seq);
  const int nq = prog.memory();
  std::uint64_t xmask = 0;
  for (QubitId q : prog.x) xmask |= std::uint64_t{1} << (nq - 1 - q);
  QftColumn col;
  col.x_part = qlinalg::Vector::Zero(Eigen::Index{1} << prog.x.size());
  double res = 0.0;
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    if (i & ~xmask) {
      res += std::norm(s[i]);
      continue;
    }
    col.x_part(static_cast<Eigen::Index>(register_value(i, nq, prog.x))) = s[i];
  }
  col.residual = std::sqrt(res);
  const qlinalg::Vector target = product_psi(specs, a);
  col.fidelity = std::norm(target.dot(col.x_part));
  return col;
}

double q_q_deviation(const CyclicGroupSpec& spec, double eps) {
  const Gate g = q_q(spec, eps);
  const int n = spec.n;
  const Eigen::Index dy = Eigen::Index{1} << n, dg = Eigen::Index{1} << (n + 1);
  double worst = 0.0;
  for (std::uint64_t a = 0; a < spec.q; ++a) {
    const qlinalg::Vector psi = psi_vector(spec, a);
    StateVector s = StateVector::from_vector(qlinalg::tensor(psi, qlinalg::basis_vector(static_cast<std::size_t>(dy * dg), 0)));
    apply_in_place(s, g, make_register(0, 3 * n + 1));
    const qlinalg::Vector ideal = qlinalg::tensor(
        psi, qlinalg::tensor(qlinalg::basis_vector(static_cast<std::size_t>(dy), a), qlinalg::basis_vector(static_cast<std::size_t>(dg), 0)));
    worst = std::max(worst, (s.to_vector() - ideal).norm());
  }
  return worst;
}

LiteralQq literal_q_q(const CyclicGroupSpec& spec, int shots) {
  const int n = spec.n;
  const int levels = 2 * n + 1;
  const int n_anc = 2 * shots * levels;
  const int mem = 3 * n + 1 + n_anc;
  if (mem > kMaxQubits || n_anc + n + 1 > 20) throw QubitBudgetExceeded("literal_q_q: too many ancillas");
  LiteralQq lit;
  lit.x = make_register(0, n);
  lit.y = make_register(n, n);
  lit.g = make_register(2 * n, n + 1);
  lit.anc = make_register(3 * n + 1, n_anc);
  OperationSequence u;
  u.memory_size = mem;
  std::vector<std::uint64_t> shift(std::size_t{1} << n);
  for (std::uint64_t b = 0; b < shift.size(); ++b) shift[b] = b < spec.q ? (b + 1) % spec.q : b;
  const auto powers = power_ladder(Gate::permutation(PermutationTable(n, shift)), levels);
  int k = 0;
  for (int j = 0; j < levels; ++j) {
    for (int variant = 0; variant < 2; ++variant) {
      for (int t = 0; t < shots; ++t) append_xi(u, powers[static_cast<std::size_t>(j)], lit.anc[static_cast<std::size_t>(k++)], lit.x, variant == 1);
    }
  }
  // decoder: G ^= code(ancilla bits)
  const int dbits = n_anc + n + 1;
  std::vector<std::uint64_t> dec(std::size_t{1} << dbits);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n_anc); ++bits) {
    std::vector<int> idx;
    for (int j = 0; j < levels; ++j) {
      int oc = 0, os = 0;
      for (int t = 0; t < shots; ++t) {
        oc += static_cast<int>((bits >> (n_anc - 1 - (2 * j * shots + t))) & 1U);
        os += static_cast<int>((bits >> (n_anc - 1 - (2 * j * shots + shots + t))) & 1U);
      }
      idx.push_back(localize_index(oc, os, shots));
    }
    std::uint64_t code = spec.q + 1;
    if (const auto num = stitch(idx)) {
      try {
        const RationalPhase ph = continued_fraction_recover(
            RationalPhase{round_to_grid(*num, n), std::uint64_t{1} << (2 * n + 1)}, n);
        if (const auto c = decode_cycle_phase(ph, spec.q)) code = *c + 1;
      } catch (const ReconstructionFailure&) {
      }
    }
    for (std::uint64_t g = 0; g < (std::uint64_t{1} << (n + 1)); ++g) {
      dec[(bits << (n + 1)) | g] = (bits << (n + 1)) | (g ^ code);
    }
  }
  u.add(Gate::permutation(PermutationTable(dbits, std::move(dec))), concat(lit.anc, lit.g));
  // T: Y ^= g - 1 for g in 1..q
  std::vector<std::uint64_t> tmap(std::size_t{1} << (2 * n + 1));
  for (std::uint64_t g = 0; g < (std::uint64_t{1} << (n + 1)); ++g) {
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y) {
      const std::uint64_t y2 = (g >= 1 && g <= spec.q) ? (y ^ (g - 1)) : y;
      tmap[(g << n) | y] = (g << n) | y2;
    }
  }
  lit.seq.memory_size = mem;
  lit.seq.append(u);
  lit.seq.add(Gate::permutation(PermutationTable(2 * n + 1, std::move(tmap))), concat(lit.g, lit.y));
  lit.seq.append(u.inverse());
  lit.seq.input_register = concat(lit.x, lit.y);
  lit.seq.output_register = concat(lit.x, lit.y);
  return lit;
}

}  // namespace kitaev
