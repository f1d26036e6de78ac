#ifndef ORIGAMIFAN_NUMERIC_HPP
#define ORIGAMIFAN_NUMERIC_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace origami {

// Exact arithmetic throughout: Delzant and unimodularity checks are
// determinant-equals-one decisions, so no floating point anywhere in the core.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using Vec = std::vector<Int>;   // lattice vector in Z^n
using QVec = std::vector<Rat>;  // rational point or direction in Q^n

// Domain failures carry a stable machine-readable code ("ZeroVector",
// "NotUnimodular", ...) plus a human-readable message.
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw DomainError("ZeroDenominator", "rational with denominator 0");
  return Rat(num, den);
}

std::string rat_to_string(const Rat& q);
Rat rat_from_string(const std::string& s);

inline Int int_abs(const Int& x) { return x < 0 ? Int(-x) : x; }

std::string vec_to_string(const Vec& v);
std::string qvec_to_string(const QVec& v);

}  // namespace origami

#endif
