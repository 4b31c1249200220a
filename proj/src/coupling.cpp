#include "exo/coupling.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iostream>
#include <set>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_coupling.h>

namespace exo {

namespace {

bool triangle(int two_a, int two_b, int two_c) {
  return two_c >= std::abs(two_a - two_b) && two_c <= two_a + two_b &&
         (two_a + two_b + two_c) % 2 == 0;
}

bool valid_projection(int two_j, int two_m) {
  return two_j >= 0 && std::abs(two_m) <= two_j && (two_j + two_m) % 2 == 0;
}

std::string label_str(int two_j) {
  if (two_j % 2 == 0) return std::to_string(two_j / 2);
  return std::to_string(two_j) + "/2";
}

class TreeParser {
 public:
  explicit TreeParser(std::string_view text) : text_(text) {}

  CouplingTree parse() {
    CouplingTree tree = node();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return tree;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument(
        "tree literal: " + what + " at offset " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  int integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) fail("expected integer");
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  int label() {
    expect('_');
    const int whole = integer();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      if (integer() != 2) fail("half-integer labels must be p/2");
      return whole;
    }
    return 2 * whole;
  }

  CouplingTree node() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      CouplingTree left = node();
      CouplingTree right = node();
      expect(')');
      const int two_j = label();
      return CouplingTree::couple(std::move(left), std::move(right), two_j);
    }
    return CouplingTree::leaf(integer());
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void fill_state(const CouplingTree& tree, int two_m, int n_spins, Vector& out) {
  out.setZero();
  if (tree.is_leaf()) {
    const int bit = n_spins - tree.spin();
    out(two_m > 0 ? 0 : (1 << bit)) = 1.0;
    return;
  }
  const int jl = tree.left().two_j();
  const int jr = tree.right().two_j();
  const int dim = static_cast<int>(out.size());
  Vector left(dim), right(dim);
  for (int ml = -jl; ml <= jl; ml += 2) {
    const int mr = two_m - ml;
    if (!valid_projection(jr, mr)) continue;
    const double cg = clebsch_gordan(jl, ml, jr, mr, tree.two_j(), two_m);
    if (cg == 0.0) continue;
    fill_state(tree.left(), ml, n_spins, left);
    fill_state(tree.right(), mr, n_spins, right);
    out += cg * disjoint_product(left, right);
  }
}

}  // namespace

CouplingTree CouplingTree::leaf(int spin) {
  if (spin < 1 || spin > kMaxSpins) {
    throw std::invalid_argument("leaf index out of range");
  }
  CouplingTree t;
  t.spin_ = spin;
  t.two_j_ = 1;
  return t;
}

CouplingTree CouplingTree::couple(CouplingTree left, CouplingTree right, int two_j) {
  if (!triangle(left.two_j(), right.two_j(), two_j)) {
    throw std::invalid_argument(
        "label " + label_str(two_j) + " violates the triangle rule for " +
        label_str(left.two_j()) + " x " + label_str(right.two_j()));
  }
  std::vector<int> all = left.leaves();
  const auto rl = right.leaves();
  all.insert(all.end(), rl.begin(), rl.end());
  if (std::set<int>(all.begin(), all.end()).size() != all.size()) {
    throw std::invalid_argument("tree uses a spin twice");
  }
  CouplingTree t;
  t.two_j_ = two_j;
  t.left_ = std::make_shared<const CouplingTree>(std::move(left));
  t.right_ = std::make_shared<const CouplingTree>(std::move(right));
  return t;
}

std::vector<int> CouplingTree::leaves() const {
  if (is_leaf()) return {spin_};
  auto out = left_->leaves();
  const auto r = right_->leaves();
  out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::string CouplingTree::str() const {
  if (is_leaf()) return std::to_string(spin_);
  return "(" + left_->str() + " " + right_->str() + ")_" + label_str(two_j_);
}

CouplingTree parse_tree(std::string_view text) { return TreeParser(text).parse(); }

double clebsch_gordan(
    int two_j1, int two_m1, int two_j2, int two_m2, int two_J, int two_M) {
  if (two_m1 + two_m2 != two_M) return 0.0;
  if (!valid_projection(two_j1, two_m1) || !valid_projection(two_j2, two_m2) ||
      !valid_projection(two_J, two_M)) {
    return 0.0;
  }
  if (!triangle(two_j1, two_j2, two_J)) return 0.0;

  gsl_sf_result r;
  const int status = gsl_sf_coupling_3j_e(
      two_j1, two_j2, two_J, two_m1, two_m2, -two_M, &r);
  if (status != GSL_SUCCESS) {
    throw std::runtime_error(
        std::string("gsl_sf_coupling_3j_e: ") + gsl_strerror(status));
  }
  // <j1 m1; j2 m2|J M> = (-1)^(j1 - j2 + M) sqrt(2J + 1) (j1 j2 J; m1 m2 -M)
  const int phase_exp = (two_j1 - two_j2 + two_M) / 2;
  const double sign = (phase_exp % 2 == 0) ? 1.0 : -1.0;
  return sign * std::sqrt(static_cast<double>(two_J + 1)) * r.val;
}

Vector embedded_state(const CouplingTree& tree, int two_sz, int n_spins) {
  const auto lv = tree.leaves();
  if (*std::max_element(lv.begin(), lv.end()) > n_spins) {
    throw std::invalid_argument("tree leaf beyond the register");
  }
  if (!valid_projection(tree.two_j(), two_sz)) {
    throw std::domain_error(
        "sz = " + label_str(two_sz) + " not allowed for root spin " +
        label_str(tree.two_j()));
  }
  Vector v(dimension(n_spins));
  fill_state(tree, two_sz, n_spins, v);
  return v;
}

CoupledState coupled_state(const CouplingTree& tree, int two_sz) {
  auto lv = tree.leaves();
  std::sort(lv.begin(), lv.end());
  const int n = static_cast<int>(lv.size());
  for (int k = 0; k < n; ++k) {
    if (lv[k] != k + 1) {
      throw std::invalid_argument("tree leaves must be exactly the spins 1..n");
    }
  }
  return {tree, two_sz, n, embedded_state(tree, two_sz, n)};
}

Vector disjoint_product(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  Vector out = Vector::Zero(a.size());
  for (Eigen::Index x = 0; x < a.size(); ++x) {
    if (a(x) == 0.0) continue;
    for (Eigen::Index y = 0; y < b.size(); ++y) {
      if (b(y) == 0.0) continue;
      if ((x & y) != 0) throw std::invalid_argument("supports overlap");
      out(x | y) += a(x) * b(y);
    }
  }
  return out;
}

Complex overlap(const CoupledState& x, const CoupledState& y) {
  if (x.n_spins != y.n_spins) throw std::invalid_argument("register mismatch");
  if (x.two_sz != y.two_sz) {
    std::clog << "warning: overlap of states with different sz is zero\n";
    return 0.0;
  }
  return x.vector.dot(y.vector);
}

double compute_F(int two_sz) {
  const auto left = coupled_state(parse_tree("((1 2)_1 (3 4)_1)_1"), two_sz);
  const auto right = coupled_state(parse_tree("(1 ((2 3)_1 4)_3/2)_1"), two_sz);
  return overlap(left, right).real();
}

SectorProjector sector_projector(
    int n_spins, std::span<const int> spins, int two_s) {
  if (spins.empty()) throw std::invalid_argument("empty spin subset");
  const int k = static_cast<int>(spins.size());
  SectorProjector out{{spins.begin(), spins.end()}, two_s, {}, true};
  const int d = dimension(n_spins);
  const Matrix s2 = subset_spin_squared(n_spins, spins);
  const Matrix id = Matrix::Identity(d, d);
  out.attainable = two_s >= 0 && two_s <= k && (k - two_s) % 2 == 0;
  if (!out.attainable) {
    out.projector = Matrix::Zero(d, d);
    return out;
  }
  auto casimir = [](int two_j) { return 0.25 * two_j * (two_j + 2); };
  out.projector = id;
  for (int other = k % 2; other <= k; other += 2) {
    if (other == two_s) continue;
    out.projector = out.projector * (s2 - casimir(other) * id) /
                    (casimir(two_s) - casimir(other));
  }
  return out;
}

}  // namespace exo
