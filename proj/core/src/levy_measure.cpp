#include "levytrim/levy_measure.hpp"

#include "levytrim/error.hpp"
#include "levytrim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace levytrim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLevelLo = 1e-300;
constexpr double kLevelHi = 1e300;
constexpr double kLogTol = 1e-12;  // relative tolerance on the level
constexpr int kMaxSteps = 200;
constexpr int kTableSize = 4097;

std::vector<Atom> normalize_atoms(std::vector<Atom> atoms) {
  for (const auto& a : atoms) {
    if (!(a.location > 0.0) || !std::isfinite(a.location) || !(a.mass > 0.0) ||
        !std::isfinite(a.mass)) {
      throw ConfigError("atoms need finite positive location and mass");
    }
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  std::vector<Atom> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && merged.back().location == a.location) {
      merged.back().mass += a.mass;
    } else {
      merged.push_back(a);
    }
  }
  return merged;
}

}  // namespace

namespace detail {

class TailImpl {
 public:
  virtual ~TailImpl() = default;

  virtual double evaluate(double x) const = 0;
  virtual double left_limit(double x) const = 0;
  virtual double inverse(double v) const { return numeric_inverse(v); }
  virtual bool has_analytic_inverse() const { return false; }
  virtual bool has_density() const = 0;
  virtual double density(double x) const = 0;
  virtual double first_moment(double a, double b) const = 0;
  virtual double second_moment_below(double x) const = 0;
  virtual double total_mass() const = 0;
  virtual double support_upper() const = 0;
  virtual std::shared_ptr<const TailImpl> base_for_truncation() const { return nullptr; }

  const std::vector<Atom>& atoms() const { return atoms_; }

  double atom_mass_at(double x) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                               [](const Atom& a, double v) { return a.location < v; });
    return (it != atoms_.end() && it->location == x) ? it->mass : 0.0;
  }

 protected:
  void build_table() {
    table_s_.resize(kTableSize);
    table_f_.resize(kTableSize);
    const double s0 = std::log(kLevelLo);
    const double s1 = std::log(kLevelHi);
    for (int j = 0; j < kTableSize; ++j) {
      const double s = s0 + (s1 - s0) * j / (kTableSize - 1);
      table_s_[j] = s;
      table_f_[j] = evaluate(std::exp(s));
    }
  }

  double numeric_inverse(double v) const {
    if (!(v > 0.0)) {
      const double up = support_upper();
      if (std::isfinite(up)) return up;
      throw NumericFailure("inverse tail at v <= 0 on unbounded support", kLevelLo, kLevelHi);
    }
    if (total_mass() <= v) return 0.0;
    double lo = kLevelLo;
    double hi = kLevelHi;

    if (!atoms_.empty()) {
      // Smallest atom whose tail value drops to v; between atoms the tail is continuous.
      std::size_t a = 0;
      std::size_t b = atoms_.size();
      while (a < b) {
        const std::size_t mid = (a + b) / 2;
        if (evaluate(atoms_[mid].location) <= v) {
          b = mid;
        } else {
          a = mid + 1;
        }
      }
      if (a < atoms_.size()) {
        const double loc = atoms_[a].location;
        if (left_limit(loc) > v) return loc;
        hi = loc;
      }
      if (a > 0) lo = std::max(lo, atoms_[a - 1].location);
    }

    double guess = std::nan("");
    if (!table_f_.empty()) {
      auto it = std::partition_point(table_f_.begin(), table_f_.end(),
                                     [v](double f) { return f > v; });
      const auto j = static_cast<std::size_t>(it - table_f_.begin());
      if (j < table_f_.size()) hi = std::min(hi, std::exp(table_s_[j]));
      if (j > 0) {
        lo = std::max(lo, std::exp(table_s_[j - 1]));
        if (j < table_f_.size()) {
          const double f0 = table_f_[j - 1];
          const double f1 = table_f_[j];
          if (f1 > 0.0 && std::isfinite(f0)) {
            const double w = std::log(f0 / v) / std::log(f0 / f1);
            guess = table_s_[j - 1] + w * (table_s_[j] - table_s_[j - 1]);
          }
        }
      }
    }
    return bracketed_solve(v, lo, hi, guess);
  }

  /// Safeguarded Newton in s = ln y on a bracket with f(lo) > v ≥ f(hi).
  double bracketed_solve(double v, double lo, double hi, double guess) const {
    if (lo == kLevelLo && !(evaluate(lo) > v)) return lo;
    if (hi == kLevelHi && evaluate(hi) > v) {
      throw NumericFailure("tail does not fall below v inside the level range", lo, hi);
    }
    double s_lo = std::log(lo);
    double s_hi = std::log(hi);
    double s = (std::isfinite(guess) && guess > s_lo && guess < s_hi) ? guess : 0.5 * (s_lo + s_hi);
    const bool newton = has_density();
    // Widths two and one steps back: Newton that fails to halve the bracket over two steps
    // (rounding noise in g near a flat stretch) gives way to bisection.
    double width_2 = s_hi - s_lo;
    double width_1 = width_2;
    for (int step = 0; step < kMaxSteps; ++step) {
      if (s_hi - s_lo <= kLogTol) return std::exp(s_hi);
      const double y = std::exp(s);
      const double g = evaluate(y) - v;
      if (g > 0.0) {
        s_lo = s;
      } else {
        s_hi = s;
      }
      if (s_hi - s_lo <= kLogTol) return std::exp(s_hi);
      double next = std::nan("");
      if (newton && std::isfinite(g)) {
        const double slope = -y * density(y);
        if (slope < 0.0 && std::isfinite(slope)) {
          const double delta = -g / slope;
          if (std::abs(delta) < 0.25 * kLogTol) {
            next = (g > 0.0) ? s + 0.5 * kLogTol : s - 0.5 * kLogTol;
          } else {
            next = s + delta;
          }
        }
      }
      const double width = s_hi - s_lo;
      if (!(next > s_lo && next < s_hi) || width > 0.5 * width_2) next = 0.5 * (s_lo + s_hi);
      width_2 = width_1;
      width_1 = width;
      s = next;
    }
    throw NumericFailure("inverse tail did not converge", std::exp(s_lo), std::exp(s_hi));
  }

  std::vector<Atom> atoms_;
  std::vector<double> table_s_;
  std::vector<double> table_f_;
};

namespace {

class BaseTail final : public TailImpl {
 public:
  BaseTail(ContinuousTail cont, std::vector<Atom> atoms) : cont_(std::move(cont)) {
    atoms_ = normalize_atoms(std::move(atoms));
    suffix_.assign(atoms_.size() + 1, 0.0);
    for (std::size_t i = atoms_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + atoms_[i].mass;
    if (!cont_.tail) {
      cont_.total_mass = 0.0;
      cont_.support_upper = 0.0;
    }
    if (cont_.tail && (!cont_.inverse || !atoms_.empty())) build_table();
  }

  double evaluate(double x) const override {
    auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                               [](double v, const Atom& a) { return v < a.location; });
    return continuous(x) + suffix_[static_cast<std::size_t>(it - atoms_.begin())];
  }

  double left_limit(double x) const override {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                               [](const Atom& a, double v) { return a.location < v; });
    return continuous(x) + suffix_[static_cast<std::size_t>(it - atoms_.begin())];
  }

  double inverse(double v) const override {
    if (!cont_.tail) {
      if (!(v > 0.0)) return atoms_.empty() ? 0.0 : atoms_.back().location;
      if (suffix_[0] <= v) return 0.0;
      // Smallest i with Π̄(a_i) = suffix[i+1] ≤ v.
      auto it = std::partition_point(suffix_.begin() + 1, suffix_.end(),
                                     [v](double s) { return s > v; });
      return atoms_[static_cast<std::size_t>(it - suffix_.begin()) - 1].location;
    }
    if (cont_.inverse && atoms_.empty()) {
      if (cont_.total_mass <= v) return 0.0;
      // Closed forms can land an ulp low; step up until Π̄(y) ≤ v holds.
      double y = cont_.inverse(v);
      for (int k = 0; k < 8 && y < kLevelHi && continuous(y) > v; ++k) {
        y = std::nextafter(y, std::numeric_limits<double>::infinity());
      }
      return y;
    }
    return numeric_inverse(v);
  }

  bool has_analytic_inverse() const override {
    return !cont_.tail || (cont_.inverse && atoms_.empty());
  }
  bool has_density() const override { return !cont_.tail || static_cast<bool>(cont_.density); }

  double density(double x) const override {
    if (!cont_.tail) return 0.0;
    if (!cont_.density) throw UnsupportedMeasure("tail has no density");
    if (x >= cont_.support_upper) return 0.0;
    return cont_.density(x);
  }

  double first_moment(double a, double b) const override {
    a = std::max(a, 0.0);
    if (!(b > a)) return 0.0;
    double sum = 0.0;
    for (const auto& at : atoms_) {
      if (at.location > a && at.location <= b) sum += at.location * at.mass;
    }
    if (!cont_.tail) return sum;
    const double bb = std::min(b, cont_.support_upper);
    if (!(bb > a)) return sum;
    if (cont_.first_moment) return sum + cont_.first_moment(a, bb);
    if (!cont_.density) throw UnsupportedMeasure("no density or closed form for first moment");
    const auto& d = cont_.density;
    return sum + quad::integrate_log([&d](double y) { return y * d(y); }, a, bb);
  }

  double second_moment_below(double x) const override {
    if (!(x > 0.0)) return 0.0;
    double sum = 0.0;
    for (const auto& at : atoms_) {
      if (at.location <= x) sum += at.location * at.location * at.mass;
    }
    if (!cont_.tail) return sum;
    const double xx = std::min(x, cont_.support_upper);
    if (cont_.second_moment_below) return sum + cont_.second_moment_below(xx);
    if (!cont_.density) throw UnsupportedMeasure("no density or closed form for second moment");
    const auto& d = cont_.density;
    return sum + quad::integrate_log([&d](double y) { return y * y * d(y); }, 0.0, xx);
  }

  double total_mass() const override { return cont_.total_mass + suffix_[0]; }

  double support_upper() const override {
    const double a = atoms_.empty() ? 0.0 : atoms_.back().location;
    return std::max(a, cont_.support_upper);
  }

 private:
  double continuous(double x) const {
    if (!cont_.tail || x >= cont_.support_upper) return 0.0;
    if (!(x > 0.0)) return cont_.total_mass;
    return cont_.tail(x);
  }

  ContinuousTail cont_;
  std::vector<double> suffix_;
};

class TruncTail final : public TailImpl {
 public:
  TruncTail(std::shared_ptr<const TailImpl> base, double level)
      : base_(std::move(base)), level_(level), cut_(base_->left_limit(level)) {
    for (const auto& a : base_->atoms()) {
      if (a.location < level_) atoms_.push_back(a);
    }
  }

  double evaluate(double x) const override {
    return x < level_ ? std::max(0.0, base_->evaluate(x) - cut_) : 0.0;
  }
  double left_limit(double x) const override {
    return x <= level_ ? std::max(0.0, base_->left_limit(x) - cut_) : 0.0;
  }
  double inverse(double v) const override {
    if (!(v > 0.0)) return support_upper();
    return std::min(level_, base_->inverse(v + cut_));
  }
  bool has_analytic_inverse() const override { return base_->has_analytic_inverse(); }
  bool has_density() const override { return base_->has_density(); }
  double density(double x) const override { return x < level_ ? base_->density(x) : 0.0; }

  double first_moment(double a, double b) const override {
    const double aa = std::min(a, level_);
    const double bb = std::min(b, level_);
    double r = base_->first_moment(aa, bb);
    if (b >= level_ && a < level_) r -= level_ * base_->atom_mass_at(level_);
    return r;
  }
  double second_moment_below(double x) const override {
    if (x < level_) return base_->second_moment_below(x);
    return base_->second_moment_below(level_) - level_ * level_ * base_->atom_mass_at(level_);
  }
  double total_mass() const override { return base_->total_mass() - cut_; }
  double support_upper() const override { return std::min(level_, base_->support_upper()); }
  std::shared_ptr<const TailImpl> base_for_truncation() const override { return base_; }

  double level() const { return level_; }

 private:
  std::shared_ptr<const TailImpl> base_;
  double level_;
  double cut_;
};

class SumTail final : public TailImpl {
 public:
  SumTail(std::shared_ptr<const TailImpl> a, std::shared_ptr<const TailImpl> b, bool table)
      : a_(std::move(a)), b_(std::move(b)) {
    std::vector<Atom> all = a_->atoms();
    all.insert(all.end(), b_->atoms().begin(), b_->atoms().end());
    atoms_ = normalize_atoms(std::move(all));
    a_zero_ = a_->total_mass() == 0.0;
    b_zero_ = b_->total_mass() == 0.0;
    if (table && !a_zero_ && !b_zero_) build_table();
  }

  double evaluate(double x) const override { return a_->evaluate(x) + b_->evaluate(x); }
  double left_limit(double x) const override { return a_->left_limit(x) + b_->left_limit(x); }
  double inverse(double v) const override {
    if (b_zero_) return a_->inverse(v);
    if (a_zero_) return b_->inverse(v);
    return numeric_inverse(v);
  }
  bool has_analytic_inverse() const override {
    return (b_zero_ && a_->has_analytic_inverse()) || (a_zero_ && b_->has_analytic_inverse());
  }
  bool has_density() const override { return a_->has_density() && b_->has_density(); }
  double density(double x) const override { return a_->density(x) + b_->density(x); }
  double first_moment(double a, double b) const override {
    return a_->first_moment(a, b) + b_->first_moment(a, b);
  }
  double second_moment_below(double x) const override {
    return a_->second_moment_below(x) + b_->second_moment_below(x);
  }
  double total_mass() const override { return a_->total_mass() + b_->total_mass(); }
  double support_upper() const override {
    return std::max(a_->support_upper(), b_->support_upper());
  }

 private:
  std::shared_ptr<const TailImpl> a_;
  std::shared_ptr<const TailImpl> b_;
  bool a_zero_ = false;
  bool b_zero_ = false;
};

std::shared_ptr<const TailImpl> zero_impl() {
  static const auto z = std::make_shared<const BaseTail>(ContinuousTail{}, std::vector<Atom>{});
  return z;
}

}  // namespace
}  // namespace detail

TailFunction::TailFunction() : impl_(detail::zero_impl()) {}
TailFunction::TailFunction(std::shared_ptr<const detail::TailImpl> impl) : impl_(std::move(impl)) {}

TailFunction TailFunction::from_parts(ContinuousTail cont, std::vector<Atom> atoms) {
  return TailFunction(std::make_shared<const detail::BaseTail>(std::move(cont), std::move(atoms)));
}

TailFunction TailFunction::from_atoms(std::vector<Atom> atoms) {
  return from_parts(ContinuousTail{}, std::move(atoms));
}

TailFunction TailFunction::sum(const TailFunction& a, const TailFunction& b, bool tabulate) {
  return TailFunction(std::make_shared<const detail::SumTail>(a.impl_, b.impl_, tabulate));
}

double TailFunction::evaluate(double x) const { return impl_->evaluate(x); }
double TailFunction::left_limit(double x) const { return impl_->left_limit(x); }
double TailFunction::inverse(double v) const { return impl_->inverse(v); }
bool TailFunction::has_analytic_inverse() const { return impl_->has_analytic_inverse(); }
bool TailFunction::has_density() const { return impl_->has_density(); }
double TailFunction::density(double x) const { return impl_->density(x); }
double TailFunction::first_moment(double a, double b) const { return impl_->first_moment(a, b); }
double TailFunction::second_moment_below(double x) const {
  return impl_->second_moment_below(x);
}
double TailFunction::total_mass() const { return impl_->total_mass(); }
const std::vector<Atom>& TailFunction::atoms() const { return impl_->atoms(); }
double TailFunction::atom_mass_at(double x) const { return impl_->atom_mass_at(x); }
double TailFunction::support_upper() const { return impl_->support_upper(); }
bool TailFunction::is_zero() const { return impl_->total_mass() == 0.0; }

TailFunction TailFunction::truncated_below(double level) const {
  if (!(level > 0.0)) throw ContractError("truncation level must be positive");
  if (level >= kInf) return *this;
  // Truncating twice keeps a single layer over the untruncated base.
  auto base = impl_->base_for_truncation();
  if (base && impl_->support_upper() <= level) return *this;
  if (base && level < impl_->support_upper()) {
    return TailFunction(std::make_shared<const detail::TruncTail>(base, level));
  }
  return TailFunction(std::make_shared<const detail::TruncTail>(impl_, level));
}

double inverse_tail(const TailFunction& tail, double v) { return tail.inverse(v); }

const char* side_name(Side side) {
  switch (side) {
    case Side::kPlus:
      return "plus";
    case Side::kMinus:
      return "minus";
    case Side::kModulus:
      return "modulus";
  }
  return "?";
}

LevyMeasureSpec LevyMeasureSpec::make(std::string name, double gamma, double sigma2,
                                      TailFunction plus, TailFunction minus) {
  if (!std::isfinite(gamma)) throw ConfigError("drift must be finite");
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw ConfigError("sigma2 must be >= 0");
  LevyMeasureSpec s;
  s.name = std::move(name);
  s.gamma = gamma;
  s.sigma2 = sigma2;
  s.tail_plus = std::move(plus);
  s.tail_minus = std::move(minus);
  s.tail_abs = TailFunction::sum(s.tail_plus, s.tail_minus);
  s.infinite_activity_plus = std::isinf(s.tail_plus.total_mass());
  s.infinite_activity_minus = std::isinf(s.tail_minus.total_mass());
  return s;
}

const TailFunction& LevyMeasureSpec::tail(Side side) const {
  switch (side) {
    case Side::kPlus:
      return tail_plus;
    case Side::kMinus:
      return tail_minus;
    case Side::kModulus:
      return tail_abs;
  }
  return tail_abs;
}

bool LevyMeasureSpec::infinite_activity(Side side) const {
  switch (side) {
    case Side::kPlus:
      return infinite_activity_plus;
    case Side::kMinus:
      return infinite_activity_minus;
    case Side::kModulus:
      return infinite_activity_plus || infinite_activity_minus;
  }
  return false;
}

TruncatedMoments truncated_moments(const LevyMeasureSpec& spec, double x) {
  if (!(x > 0.0)) throw ContractError("truncated moments need x > 0");
  double nu = spec.gamma;
  if (x < 1.0) {
    nu -= spec.tail_plus.first_moment(x, 1.0) - spec.tail_minus.first_moment(x, 1.0);
  }
  const double v =
      spec.sigma2 + spec.tail_plus.second_moment_below(x) + spec.tail_minus.second_moment_below(x);
  return {nu, v};
}

TieRates tie_rates(const LevyMeasureSpec& spec, double v, TieMode mode) {
  if (!(v > 0.0)) throw ContractError("tie rates need v > 0");
  TieRates out;
  if (mode == TieMode::kModulus) {
    const TailFunction& tail = spec.tail_abs;
    const double level = tail.inverse(v);
    out.level = level;
    if (level <= 0.0) return out;
    const double mp = spec.tail_plus.atom_mass_at(level);
    const double mm = spec.tail_minus.atom_mass_at(level);
    if (mp + mm <= 0.0) return out;
    const double excess = std::max(0.0, tail.left_limit(level) - v);
    out.plus = excess * mp / (mp + mm);
    out.minus = excess * mm / (mp + mm);
    return out;
  }
  const TailFunction& tail =
      (mode == TieMode::kOneSidedPlus) ? spec.tail_plus : spec.tail_minus;
  const double level = tail.inverse(v);
  out.level = level;
  if (level <= 0.0 || tail.atom_mass_at(level) <= 0.0) return out;
  out.plus = std::max(0.0, tail.left_limit(level) - v);
  return out;
}

}  // namespace levytrim
