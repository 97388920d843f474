#pragma once

// Path-tracking JSON reader shared by the problem and report parsers.

#include "hamnf/errors.hpp"
#include "hamnf/linalg.hpp"

#include <json.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace hamnf::detail {

using json = nlohmann::json;

class In {
 public:
  In(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return *j_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(path_.empty() ? "/" : path_, what);
  }

  In at(const std::string& key) const {
    expect_object();
    auto it = j_->find(key);
    if (it == j_->end()) In(*j_, path_ + "/" + key).fail("missing field");
    return In(*it, path_ + "/" + key);
  }
  std::optional<In> opt(const std::string& key) const {
    expect_object();
    auto it = j_->find(key);
    if (it == j_->end() || it->is_null()) return std::nullopt;
    return In(*it, path_ + "/" + key);
  }
  bool has(const std::string& key) const { return opt(key).has_value(); }

  std::size_t size() const {
    if (!j_->is_array()) fail("expected an array");
    return j_->size();
  }
  In operator[](std::size_t i) const {
    if (!j_->is_array()) fail("expected an array");
    return In((*j_)[i], path_ + "/" + std::to_string(i));
  }

  double num() const {
    if (!j_->is_number()) fail("expected a number");
    const double v = j_->get<double>();
    if (!std::isfinite(v)) fail("number is not finite");
    return v;
  }
  long long integer() const {
    if (j_->is_number_integer()) return j_->get<long long>();
    if (j_->is_number_float()) {
      const double v = j_->get<double>();
      if (std::isfinite(v) && v == std::floor(v)) return static_cast<long long>(v);
    }
    fail("expected an integer");
  }
  std::uint64_t uinteger() const {
    if (j_->is_number_unsigned()) return j_->get<std::uint64_t>();
    const long long v = integer();
    if (v < 0) fail("expected a nonnegative integer");
    return static_cast<std::uint64_t>(v);
  }
  bool boolean() const {
    if (!j_->is_boolean()) fail("expected a boolean");
    return j_->get<bool>();
  }
  std::string str() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }
  bool is_string() const { return j_->is_string(); }

  std::vector<double> numbers() const {
    std::vector<double> v(size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (*this)[i].num();
    return v;
  }
  Vector vector(std::optional<std::size_t> n = std::nullopt) const {
    const auto v = numbers();
    if (n && v.size() != *n) {
      fail("expected " + std::to_string(*n) + " entries, got " +
           std::to_string(v.size()));
    }
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  /// Row-major nested arrays.
  Matrix matrix(std::optional<std::size_t> rows = std::nullopt,
                std::optional<std::size_t> cols = std::nullopt) const {
    const std::size_t r = size();
    if (rows && r != *rows) {
      fail("expected " + std::to_string(*rows) + " rows, got " + std::to_string(r));
    }
    if (r == 0) return Matrix(0, cols.value_or(0));
    const std::size_t c = (*this)[0].size();
    if (cols && c != *cols) {
      fail("expected " + std::to_string(*cols) + " columns, got " + std::to_string(c));
    }
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      const In row = (*this)[i];
      if (row.size() != c) row.fail("ragged matrix row");
      for (std::size_t k = 0; k < c; ++k) m(i, k) = row[k].num();
    }
    return m;
  }

 private:
  void expect_object() const {
    if (!j_->is_object()) fail("expected an object");
  }

  const json* j_;
  std::string path_;
};

inline json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline json to_json(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vector(m.row(i).transpose())));
  return a;
}

inline json to_json(const TolerancePolicy& t) {
  return json{{"rank_tol", t.rank_tol},
              {"eig_zero_tol", t.eig_zero_tol},
              {"residual_tol", t.residual_tol}};
}

inline TolerancePolicy read_tolerances(const In& in) {
  TolerancePolicy t;
  if (auto v = in.opt("rank_tol")) t.rank_tol = v->num();
  if (auto v = in.opt("eig_zero_tol")) t.eig_zero_tol = v->num();
  if (auto v = in.opt("residual_tol")) t.residual_tol = v->num();
  try {
    t.validate();
  } catch (const Error& e) {
    in.fail(e.what());
  }
  return t;
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace hamnf::detail
