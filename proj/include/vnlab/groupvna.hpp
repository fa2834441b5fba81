#pragma once

// Group von Neumann algebras of finite groups, and finitely generated
// infinite groups given by exact normal forms.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "vnlab/caps.hpp"
#include "vnlab/error.hpp"
#include "vnlab/fingroup.hpp"
#include "vnlab/staralg.hpp"

namespace vnlab {

// ---------------------------------------------------------------- L(G)

/// Left translation u_g: xi_h -> xi_{gh} as a permutation matrix.
inline ComplexMatrix left_regular_unitary(const FinGroup& group, FinGroup::Element g) {
  const Index n = static_cast<Index>(group.order());
  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  for (FinGroup::Element h = 0; h < group.order(); ++h) u(static_cast<Index>(group.mul(g, h)), static_cast<Index>(h)) = 1.0;
  return u;
}

/// L(G) on l^2(G) with the vector trace of xi_e.
inline StarAlgebra left_regular_algebra(const FinGroup& group, const Caps& caps = {}, double tol = kDefaultTol) {
  check_cap("left regular representation order", group.order(), caps.left_regular);
  const Index n = static_cast<Index>(group.order());
  std::vector<ComplexMatrix> gens;
  for (auto g : generating_set(group, caps)) gens.push_back(left_regular_unitary(group, g));
  ComplexVector xi = ComplexVector::Zero(n);
  xi(static_cast<Index>(group.identity())) = 1.0;
  return generate_algebra(n, gens, tol).with_trace_vector(xi);
}

// ---------------------------------------------------------------- oracles

using BigInt = boost::multiprecision::cpp_int;
using NormalForm = std::vector<BigInt>;

struct NormalFormHash {
  std::size_t operator()(const NormalForm& v) const noexcept {
    std::size_t h = v.size();
    for (const auto& x : v) h ^= boost::multiprecision::hash_value(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

using NormalFormSet = std::unordered_set<NormalForm, NormalFormHash>;

/// Arithmetic on canonical normal forms.
class GroupModel {
 public:
  virtual ~GroupModel() = default;
  virtual NormalForm mul(const NormalForm& a, const NormalForm& b) const = 0;
  virtual NormalForm inv(const NormalForm& a) const = 0;
  virtual NormalForm identity() const = 0;
  virtual std::string format(const NormalForm& a) const = 0;
};

/// A finitely generated group: named generators over an immutable model.
class GroupOracle {
 public:
  GroupOracle(std::string name, std::shared_ptr<const GroupModel> model, std::vector<NormalForm> generators,
              std::string note = {})
      : name_(std::move(name)), model_(std::move(model)), generators_(std::move(generators)), note_(std::move(note)) {}

  const std::string& name() const noexcept { return name_; }
  const std::string& note() const noexcept { return note_; }
  const std::vector<NormalForm>& generators() const noexcept { return generators_; }
  const std::shared_ptr<const GroupModel>& model() const noexcept { return model_; }

  NormalForm mul(const NormalForm& a, const NormalForm& b) const { return model_->mul(a, b); }
  NormalForm inv(const NormalForm& a) const { return model_->inv(a); }
  NormalForm identity() const { return model_->identity(); }
  NormalForm conjugate(const NormalForm& h, const NormalForm& g) const { return mul(mul(h, g), inv(h)); }
  std::string format(const NormalForm& a) const { return model_->format(a); }

  /// Generators followed by those inverses that are not already listed.
  std::vector<NormalForm> symmetric_generators() const {
    std::vector<NormalForm> out = generators_;
    for (const auto& g : generators_) {
      auto i = inv(g);
      if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(std::move(i));
    }
    return out;
  }

 private:
  std::string name_;
  std::shared_ptr<const GroupModel> model_;
  std::vector<NormalForm> generators_;
  std::string note_;
};

namespace detail {

// Letters are +-(i+1) for generator i; words are freely reduced.
class FreeModel final : public GroupModel {
 public:
  explicit FreeModel(int rank) : rank_(rank) {}
  NormalForm mul(const NormalForm& a, const NormalForm& b) const override {
    NormalForm out = a;
    for (const auto& x : b) {
      if (!out.empty() && out.back() == -x) out.pop_back();
      else out.push_back(x);
    }
    return out;
  }
  NormalForm inv(const NormalForm& a) const override {
    NormalForm out(a.rbegin(), a.rend());
    for (auto& x : out) x = -x;
    return out;
  }
  NormalForm identity() const override { return {}; }
  std::string format(const NormalForm& a) const override {
    if (a.empty()) return "e";
    std::string s;
    for (const auto& x : a) {
      const int v = static_cast<int>(x);
      const char c = static_cast<char>(v > 0 ? 'a' + (v - 1) : 'A' + (-v - 1));
      s.push_back(c);
    }
    return s;
  }
  int rank() const noexcept { return rank_; }

 private:
  int rank_;
};

class LatticeModel final : public GroupModel {
 public:
  explicit LatticeModel(std::size_t rank) : rank_(rank) {}
  NormalForm mul(const NormalForm& a, const NormalForm& b) const override {
    NormalForm out(rank_);
    for (std::size_t i = 0; i < rank_; ++i) out[i] = a[i] + b[i];
    return out;
  }
  NormalForm inv(const NormalForm& a) const override {
    NormalForm out(rank_);
    for (std::size_t i = 0; i < rank_; ++i) out[i] = -a[i];
    return out;
  }
  NormalForm identity() const override { return NormalForm(rank_, BigInt(0)); }
  std::string format(const NormalForm& a) const override {
    std::string s = "(";
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + a[i].str();
    return s + ")";
  }

 private:
  std::size_t rank_;
};

inline BigInt determinant(const NormalForm& m, std::size_t n) {
  if (n == 1) return m[0];
  BigInt det = 0;
  for (std::size_t col = 0; col < n; ++col) {
    NormalForm minor;
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (j != col) minor.push_back(m[i * n + j]);
    const BigInt term = m[col] * determinant(minor, n - 1);
    det += col % 2 == 0 ? term : BigInt(-term);
  }
  return det;
}

// Row-major n x n integer matrices of determinant 1.
class SpecialLinearModel final : public GroupModel {
 public:
  explicit SpecialLinearModel(std::size_t n) : n_(n) {}
  NormalForm mul(const NormalForm& a, const NormalForm& b) const override {
    NormalForm out(n_ * n_, BigInt(0));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < n_; ++k) {
        if (a[i * n_ + k] == 0) continue;
        for (std::size_t j = 0; j < n_; ++j) out[i * n_ + j] += a[i * n_ + k] * b[k * n_ + j];
      }
    return out;
  }
  // adjugate, since the determinant is 1
  NormalForm inv(const NormalForm& a) const override {
    if (n_ == 1) return a;
    NormalForm out(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        NormalForm minor;
        for (std::size_t r = 0; r < n_; ++r)
          for (std::size_t c = 0; c < n_; ++c)
            if (r != i && c != j) minor.push_back(a[r * n_ + c]);
        const BigInt cof = determinant(minor, n_ - 1);
        out[j * n_ + i] = (i + j) % 2 == 0 ? cof : BigInt(-cof);
      }
    return out;
  }
  NormalForm identity() const override {
    NormalForm out(n_ * n_, BigInt(0));
    for (std::size_t i = 0; i < n_; ++i) out[i * n_ + i] = 1;
    return out;
  }
  std::string format(const NormalForm& a) const override {
    std::string s = "[";
    for (std::size_t i = 0; i < n_; ++i) {
      s += i ? ";" : "";
      for (std::size_t j = 0; j < n_; ++j) s += (j ? " " : "") + a[i * n_ + j].str();
    }
    return s + "]";
  }
  std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_;
};

// Pairs encoded as [len(a), a..., b...].
class ProductModel final : public GroupModel {
 public:
  ProductModel(std::shared_ptr<const GroupModel> left, std::shared_ptr<const GroupModel> right)
      : left_(std::move(left)), right_(std::move(right)) {}

  static NormalForm pack(const NormalForm& a, const NormalForm& b) {
    NormalForm out;
    out.reserve(a.size() + b.size() + 1);
    out.emplace_back(a.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
  }
  static std::pair<NormalForm, NormalForm> unpack(const NormalForm& p) {
    const auto len = static_cast<std::size_t>(p.at(0));
    return {NormalForm(p.begin() + 1, p.begin() + 1 + static_cast<std::ptrdiff_t>(len)),
            NormalForm(p.begin() + 1 + static_cast<std::ptrdiff_t>(len), p.end())};
  }

  NormalForm mul(const NormalForm& a, const NormalForm& b) const override {
    const auto [a1, a2] = unpack(a);
    const auto [b1, b2] = unpack(b);
    return pack(left_->mul(a1, b1), right_->mul(a2, b2));
  }
  NormalForm inv(const NormalForm& a) const override {
    const auto [a1, a2] = unpack(a);
    return pack(left_->inv(a1), right_->inv(a2));
  }
  NormalForm identity() const override { return pack(left_->identity(), right_->identity()); }
  std::string format(const NormalForm& a) const override {
    const auto [a1, a2] = unpack(a);
    return "(" + left_->format(a1) + ", " + right_->format(a2) + ")";
  }

 private:
  std::shared_ptr<const GroupModel> left_, right_;
};

inline NormalForm matrix_form(std::initializer_list<long> entries) {
  NormalForm out;
  for (long x : entries) out.emplace_back(x);
  return out;
}

}  // namespace detail

inline GroupOracle free_group(int rank) {
  if (rank < 1 || rank > 26) throw InputError("free group rank must be in 1..26");
  std::vector<NormalForm> gens;
  for (int i = 1; i <= rank; ++i) gens.push_back(NormalForm{BigInt(i)});
  return GroupOracle("F" + std::to_string(rank), std::make_shared<detail::FreeModel>(rank), std::move(gens),
                     "reduced words; generator i is letter i, capitals are inverses");
}

inline GroupOracle free_abelian_group(std::size_t rank) {
  if (rank < 1) throw InputError("free abelian group rank must be positive");
  std::vector<NormalForm> gens;
  for (std::size_t i = 0; i < rank; ++i) {
    NormalForm v(rank, BigInt(0));
    v[i] = 1;
    gens.push_back(std::move(v));
  }
  return GroupOracle("Z" + std::to_string(rank), std::make_shared<detail::LatticeModel>(rank), std::move(gens),
                     "integer tuples under addition");
}

/// SL(2,Z) generated by S = [0 -1; 1 0] and T = [1 1; 0 1].
inline GroupOracle sl2z() {
  return GroupOracle("SL2Z", std::make_shared<detail::SpecialLinearModel>(2),
                     {detail::matrix_form({0, -1, 1, 0}), detail::matrix_form({1, 1, 0, 1})},
                     "integer matrices; generators S=[0 -1;1 0], T=[1 1;0 1]");
}

/// SL(3,Z) generated by the six elementary matrices E_ij = 1 + e_ij, i != j.
inline GroupOracle sl3z() {
  std::vector<NormalForm> gens;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      NormalForm m = detail::matrix_form({1, 0, 0, 0, 1, 0, 0, 0, 1});
      m[i * 3 + j] = 1;
      gens.push_back(std::move(m));
    }
  return GroupOracle("SL3Z", std::make_shared<detail::SpecialLinearModel>(3), std::move(gens),
                     "integer matrices; generators are the six elementary matrices E_ij (i != j) and inverses");
}

/// Subgroup of SL(2,Z) generated by A = [1 2; 0 1] and B = [1 0; 2 1].
inline GroupOracle sl2z_ab() {
  return GroupOracle("SL2Z:A,B", std::make_shared<detail::SpecialLinearModel>(2),
                     {detail::matrix_form({1, 2, 0, 1}), detail::matrix_form({1, 0, 2, 1})},
                     "integer matrices; generators A=[1 2;0 1], B=[1 0;2 1]");
}

inline GroupOracle direct_product(const GroupOracle& a, const GroupOracle& b) {
  using detail::ProductModel;
  std::vector<NormalForm> gens;
  for (const auto& g : a.generators()) gens.push_back(ProductModel::pack(g, b.identity()));
  for (const auto& g : b.generators()) gens.push_back(ProductModel::pack(a.identity(), g));
  std::string note = a.note() + " | " + b.note();
  return GroupOracle(a.name() + "x" + b.name(), std::make_shared<ProductModel>(a.model(), b.model()), std::move(gens),
                     std::move(note));
}

/// Registry: F<n>, Z<d>, SL2Z, SL3Z, SL2Z:A,B, and products joined by 'x'.
inline GroupOracle named_oracle(const std::string& name) {
  if (const auto x = name.find('x'); x != std::string::npos)
    return direct_product(named_oracle(name.substr(0, x)), named_oracle(name.substr(x + 1)));
  if (name == "SL2Z") return sl2z();
  if (name == "SL3Z") return sl3z();
  if (name == "SL2Z:A,B") return sl2z_ab();
  const auto rank = [&](std::size_t from) {
    const std::string digits = name.substr(from);
    if (digits.empty() || digits.size() > 2 || !std::all_of(digits.begin(), digits.end(), ::isdigit))
      throw InputError("unknown group '" + name + "'");
    return std::stoi(digits);
  };
  if (!name.empty() && name[0] == 'F') return free_group(rank(1));
  if (!name.empty() && name[0] == 'Z') return free_abelian_group(static_cast<std::size_t>(rank(1)));
  throw InputError("unknown group '" + name + "' (known: F<n>, Z<d>, SL2Z, SL3Z, SL2Z:A,B, and AxB products)");
}

// ---------------------------------------------------------------- balls

/// Elements of word length at most `radius`, in breadth-first order.
inline std::vector<NormalForm> ball(const GroupOracle& g, int radius, const Caps& caps = {}) {
  if (radius < 0) throw InputError("ball radius must be nonnegative");
  const auto steps = g.symmetric_generators();
  std::vector<NormalForm> out{g.identity()};
  NormalFormSet seen{out.front()};
  std::size_t layer_begin = 0;
  for (int r = 0; r < radius; ++r) {
    const std::size_t layer_end = out.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i)
      for (const auto& s : steps) {
        auto w = g.mul(out[i], s);
        if (seen.insert(w).second) {
          out.push_back(std::move(w));
          check_cap("ball size", out.size(), caps.ball);
        }
      }
    layer_begin = layer_end;
    if (layer_begin == out.size()) break;
  }
  return out;
}

struct ICCCertificate {
  int inner_radius = 0;
  int outer_radius = 0;
  std::uint64_t min_conjugates = 0;
  std::uint64_t threshold = 0;
  bool passed = false;
  NormalForm witness;  // element attaining the minimum
  std::string witness_text;
  std::size_t inner_size = 0;
  std::size_t outer_size = 0;

  std::string summary() const {
    std::string s = "min #conjugates over Ball(" + std::to_string(inner_radius) + ")\\{e} by Ball(" +
                    std::to_string(outer_radius) + ") = ";
    s += min_conjugates == std::numeric_limits<std::uint64_t>::max() ? "n/a (no nontrivial elements)"
                                                                      : std::to_string(min_conjugates);
    s += passed ? "; pass: evidence of infinite classes, not a proof"
                : "; fail: a class may be finite (stable counts as R grows suggest it is)";
    return s;
  }
};

/// Finite witness for conjugacy-class growth: the fewest distinct conjugates
/// h g h^-1 (h in Ball(R)) over nontrivial g in Ball(r).
inline ICCCertificate icc_certificate(const GroupOracle& g, int inner, int outer, std::uint64_t threshold,
                                      const Caps& caps = {}) {
  ICCCertificate c;
  c.inner_radius = inner;
  c.outer_radius = outer;
  c.threshold = threshold;
  const auto small = ball(g, inner, caps);
  const auto large = ball(g, outer, caps);
  c.inner_size = small.size();
  c.outer_size = large.size();
  std::vector<NormalForm> large_inv;
  large_inv.reserve(large.size());
  for (const auto& h : large) large_inv.push_back(g.inv(h));
  c.min_conjugates = std::numeric_limits<std::uint64_t>::max();
  const auto e = g.identity();
  for (const auto& x : small) {
    if (x == e) continue;
    NormalFormSet conj;
    for (std::size_t i = 0; i < large.size(); ++i) conj.insert(g.mul(g.mul(large[i], x), large_inv[i]));
    if (conj.size() < c.min_conjugates) {
      c.min_conjugates = conj.size();
      c.witness = x;
    }
  }
  c.witness_text = c.min_conjugates == std::numeric_limits<std::uint64_t>::max() ? std::string("-") : g.format(c.witness);
  c.passed = c.min_conjugates >= threshold;
  return c;
}

}  // namespace vnlab
