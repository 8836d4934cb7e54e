#pragma once

// Integer-box search for min over canonical nonzero m of
//   |sum_j m_j a_j|          (FormKind::Abs)
//   dist(sum_j m_j a_j, D Z) (FormKind::Dist)
// with 128-bit integer coefficients a_j. Callers scale real coefficients to
// this fixed-point form; see make_fixed_point.

#include <cstdint>
#include <span>
#include <vector>

#include "kronecker/forms.hpp"
#include "kronecker/scalar.hpp"

namespace kronecker::detail {

using i128 = __int128;

enum class FormKind { Abs, Dist };

struct FixedPointForm {
  std::vector<i128> coeff;
  i128 modulus = 1;  // the scaled value of 1
  // exact: value(m) = key(m) / modulus exactly.
  // otherwise: |modulus * value(m) - S(m)| <= ||m||_1.
  bool exact = true;
};

// Throws PrecisionExhausted when the enclosures are too wide to produce a
// useful fixed-point scale.
FixedPointForm make_fixed_point(std::span<const Scalar> values, std::span<const std::int64_t> bounds);

struct SearchConfig {
  unsigned threads = 1;
  bool meet_in_the_middle = false;
  std::size_t candidate_cap = 1u << 16;
};

struct SearchHit {
  i128 key = 0;
  std::vector<std::int64_t> m;
};

// Smallest key over canonical nonzero vectors; ties go to the lexicographically
// smallest vector. Requires at least one nonzero point in the box.
SearchHit search_min(const FixedPointForm& form, std::span<const std::int64_t> bounds, FormKind kind,
                     const SearchConfig& config);

// Every canonical nonzero vector with key <= threshold, sorted
// lexicographically. Throws PrecisionExhausted beyond config.candidate_cap.
std::vector<std::vector<std::int64_t>> search_collect(const FixedPointForm& form,
                                                      std::span<const std::int64_t> bounds, FormKind kind,
                                                      i128 threshold, const SearchConfig& config);

Integer to_integer(i128 v);
i128 to_i128(const Integer& v);

}  // namespace kronecker::detail
