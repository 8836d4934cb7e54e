// Prints reference values computed by the brute-force oracles and by direct
// MPFR evaluation. The unit tests freeze these numbers.

#include <cmath>
#include <iostream>

#include "kronecker/real.hpp"
#include "oracle.hpp"

using namespace kronecker;

namespace {

Scalar preset(const char* token, int bits = 128) { return Real::parse(token).at(bits); }

void show(const char* label, const std::pair<Scalar, IntVector>& r) {
  std::cout << label << ": " << r.first.to_string(12) << " at (";
  for (std::size_t i = 0; i < r.second.size(); ++i) std::cout << (i ? "," : "") << r.second[i];
  std::cout << ")\n";
}

}  // namespace

int main() {
  std::cout << "nearest_int(70 sqrt2 @64) = " << nearest_int(Scalar(70) * preset("sqrt(2)", 64)) << "\n";
  std::cout << "sqrt2 + sqrt3 = " << (preset("sqrt(2)") + preset("sqrt(3)")).to_string(12) << "\n";

  const long double lds[] = {0.1L, 5e-4L, 0.01L};
  for (long double e : lds) {
    std::cout << "ceil((1/eps) ln(2/eps)), eps=" << static_cast<double>(e) << ": "
              << std::ceil((1 / e) * std::log(2 / e)) << "\n";
  }
  std::cout << "4 / 0.005050 = " << static_cast<double>(4 / 0.005050L) << "\n";
  std::cout << "2 e^-8 = " << static_cast<double>(2 * std::exp(-8.0L)) << "\n";
  std::cout << "3 e^-54 = " << static_cast<double>(3 * std::exp(-54.0L)) << "\n";

  const Scalar one_sqrt2[] = {Scalar(1), preset("sqrt(2)")};
  show("min |m1 + m2 sqrt2|, box 3", oracle::exhaustive_min_oracle(one_sqrt2, IntBox::uniform(2, 3)));
  show("min |m1 + m2 sqrt2|, box 160", oracle::exhaustive_min_oracle(one_sqrt2, IntBox::uniform(2, 160)));
  const Scalar two_one[] = {Scalar(2), Scalar(1)};
  show("min |2 m1 + m2|, box 2", oracle::exhaustive_min_oracle(two_one, IntBox::uniform(2, 2)));
  const Scalar sqrt2[] = {preset("sqrt(2)")};
  const auto d = oracle::exhaustive_min_dist_oracle(sqrt2, IntBox::uniform(1, 3));
  show("min ||m sqrt2||, box 3", d);
  std::cout << "  / 0.17 = " << (d.first / Scalar(Rational(17, 100))).to_string(12) << "\n";
  std::cout << "  / 0.18 = " << (d.first / Scalar(Rational(18, 100))).to_string(12) << "\n";

  KroneckerInstance inst;
  inst.lambda = {Scalar(1), preset("sqrt(2)")};
  inst.alpha = {Scalar(Rational(1, 2)), Scalar(Rational(1, 2))};
  inst.eps = {Scalar(Rational(3, 10)), Scalar(Rational(3, 10))};
  inst.tau = Scalar(0);
  const auto t = oracle::grid_witness_oracle(inst, Scalar(8), Rational(1, 10000));
  std::cout << "grid witness (1, sqrt2), eps 3/10, T 8: " << (t ? t->to_string(8) : "none") << "\n";

  LinearFormSystem third(1, 1, {Scalar(Rational(1, 3))});
  const Scalar half[] = {Scalar(Rational(1, 2))};
  const Scalar tenth[] = {Scalar(Rational(1, 10))};
  const Scalar one[] = {Scalar(1)};
  const auto sol = oracle::exhaustive_solution_oracle(third, half, tenth, one);
  std::cout << "solutions of ||q/3 - 1/2|| <= 1/10, |q| <= 1: " << (sol ? (*sol)[0].get_str() : "none") << "\n";
}
