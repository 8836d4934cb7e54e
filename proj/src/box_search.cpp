#include "box_search.hpp"

#include <algorithm>
#include <mutex>

#include "kronecker/errors.hpp"
#include "parallel.hpp"

namespace kronecker::detail {

Integer to_integer(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  Integer hi(static_cast<unsigned long>(u >> 64));
  Integer lo(static_cast<unsigned long>(u & ~0ULL));
  Integer r = (hi << 64) + lo;
  return neg ? Integer(-r) : r;
}

i128 to_i128(const Integer& v) {
  Integer a = ::abs(v);
  Integer hi = a >> 64;
  Integer lo = a - (hi << 64);
  unsigned __int128 u = (static_cast<unsigned __int128>(hi.get_ui()) << 64) | lo.get_ui();
  return v < 0 ? -static_cast<i128>(u) : static_cast<i128>(u);
}

namespace {

constexpr i128 kInf = static_cast<i128>(1) << 126;
constexpr std::size_t kMaxMitmTable = std::size_t{1} << 22;

i128 iabs(i128 x) { return x < 0 ? -x : x; }

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 ceil_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

using Vec = std::vector<std::int64_t>;

bool lex_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool canonical_nonzero(const Vec& v, std::size_t from = 0) {
  for (std::size_t j = from; j < v.size(); ++j) {
    if (v[j] != 0) return v[j] > 0;
  }
  return false;
}

struct MinState {
  i128 best = kInf;
  Vec best_m;  // empty until something is found

  bool offer(i128 key, const Vec& m) {
    if (key < best || (key == best && (best_m.empty() || lex_less(m, best_m)))) {
      best = key;
      best_m = m;
      return true;
    }
    return false;
  }
};

class Searcher {
 public:
  Searcher(const FixedPointForm& form, std::span<const std::int64_t> bounds, FormKind kind)
      : n_(bounds.size()), a_(form.coeff), modulus_(form.modulus), bounds_(bounds.begin(), bounds.end()),
        kind_(kind) {
    reach_.assign(n_ + 1, 0);
    for (std::size_t j = n_; j-- > 0;) reach_[j] = reach_[j + 1] + bounds_[j] * iabs(a_[j]);
  }

  std::size_t dim() const { return n_; }

  i128 key(i128 s) const {
    if (kind_ == FormKind::Abs) return iabs(s);
    i128 r = s % modulus_;
    if (r < 0) r += modulus_;
    return std::min(r, modulus_ - r);
  }

  // Smallest key reachable from partial sum p when the remaining
  // contribution lies in [-r, r].
  i128 reach_lower(i128 p, i128 r) const {
    if (kind_ == FormKind::Abs) return std::max<i128>(iabs(p) - r, 0);
    if (2 * r >= modulus_) return 0;
    i128 lo = (p - r) % modulus_;
    if (lo < 0) lo += modulus_;
    if (lo == 0 || lo + 2 * r >= modulus_) return 0;
    return std::min(lo, modulus_ - (lo + 2 * r));
  }

  // Units: 0 is the slab whose only nonzero coordinate is the last one;
  // the others fix (k, v) with m_0 .. m_{k-1} = 0 and m_k = v >= 1.
  std::size_t unit_count() const {
    std::size_t c = 1;
    for (std::size_t k = 0; k + 1 < n_; ++k) c += static_cast<std::size_t>(bounds_[k]);
    return c;
  }

  std::pair<std::size_t, std::int64_t> unit(std::size_t index) const {
    if (index == 0) return {n_ - 1, 0};
    --index;
    for (std::size_t k = n_ - 1; k-- > 0;) {
      if (index < static_cast<std::size_t>(bounds_[k])) return {k, static_cast<std::int64_t>(index) + 1};
      index -= static_cast<std::size_t>(bounds_[k]);
    }
    return {0, 0};
  }

  void run_min_unit(std::size_t index, MinState& st) const {
    auto [k, v] = unit(index);
    Vec m(n_, 0);
    if (k == n_ - 1) {
      innermost_min(n_ - 1, 0, 1, bounds_[n_ - 1], m, st);
      return;
    }
    m[k] = v;
    dfs_min(k + 1, static_cast<i128>(v) * a_[k], m, st);
  }

  void run_collect_unit(std::size_t index, i128 threshold, std::vector<Vec>& out, std::size_t cap) const {
    auto [k, v] = unit(index);
    Vec m(n_, 0);
    if (k == n_ - 1) {
      innermost_collect(n_ - 1, 0, 1, bounds_[n_ - 1], threshold, m, out, cap);
      return;
    }
    m[k] = v;
    dfs_collect(k + 1, static_cast<i128>(v) * a_[k], threshold, m, out, cap);
  }

 private:
  // v in [lo, hi] with |p + v a| <= limit.
  static bool solve_abs(i128 p, i128 a, i128 limit, std::int64_t lo, std::int64_t hi, std::int64_t& out_lo,
                        std::int64_t& out_hi) {
    i128 vlo = lo, vhi = hi;
    if (a == 0) {
      if (iabs(p) > limit) return false;
    } else if (a > 0) {
      vlo = std::max<i128>(vlo, ceil_div(-limit - p, a));
      vhi = std::min<i128>(vhi, floor_div(limit - p, a));
    } else {
      const i128 b = -a;
      vlo = std::max<i128>(vlo, ceil_div(p - limit, b));
      vhi = std::min<i128>(vhi, floor_div(p + limit, b));
    }
    if (vlo > vhi) return false;
    out_lo = static_cast<std::int64_t>(vlo);
    out_hi = static_cast<std::int64_t>(vhi);
    return true;
  }

  void innermost_min(std::size_t l, i128 p, std::int64_t lo, std::int64_t hi, Vec& m, MinState& st) const {
    if (lo > hi) return;
    const i128 a = a_[l];
    if (kind_ == FormKind::Abs) {
      std::int64_t choice = lo;
      if (a != 0) {
        // |p + v a| is convex in v; the integer minimum sits next to -p/a.
        i128 r_floor = a > 0 ? floor_div(-p, a) : floor_div(p, -a);
        i128 cands[2] = {std::clamp<i128>(r_floor, lo, hi), std::clamp<i128>(r_floor + 1, lo, hi)};
        i128 best_key = kInf;
        for (i128 c : cands) {
          const i128 kk = iabs(p + c * a);
          if (kk < best_key || (kk == best_key && c < choice)) {
            best_key = kk;
            choice = static_cast<std::int64_t>(c);
          }
        }
      }
      const i128 kk = iabs(p + static_cast<i128>(choice) * a);
      if (kk <= st.best) {
        m[l] = choice;
        st.offer(kk, m);
        m[l] = 0;
      }
      return;
    }
    for (std::int64_t v = lo; v <= hi; ++v) {
      const i128 kk = key(p + static_cast<i128>(v) * a);
      if (kk <= st.best) {
        m[l] = v;
        st.offer(kk, m);
      }
      if (a % modulus_ == 0) break;  // every v gives the same key
    }
    m[l] = 0;
  }

  void dfs_min(std::size_t l, i128 p, Vec& m, MinState& st) const {
    if (l == n_ - 1) {
      innermost_min(l, p, -bounds_[l], bounds_[l], m, st);
      return;
    }
    if (reach_lower(p, reach_[l]) > st.best) return;
    const i128 a = a_[l];
    const i128 rest = reach_[l + 1];
    const std::int64_t b = bounds_[l];
    if (a == 0 || (kind_ == FormKind::Dist && a % modulus_ == 0)) {
      // All choices of m_l give the same sums; -B is lexicographically first.
      m[l] = -b;
      dfs_min(l + 1, p + static_cast<i128>(-b) * a, m, st);
      m[l] = 0;
      return;
    }
    if (kind_ == FormKind::Abs) {
      i128 used = st.best;
      std::int64_t vlo, vhi;
      if (!solve_abs(p, a, used + rest, -b, b, vlo, vhi)) return;
      for (std::int64_t v = vlo; v <= vhi; ++v) {
        if (st.best < used) {
          used = st.best;
          std::int64_t nlo, nhi;
          if (!solve_abs(p, a, used + rest, -b, b, nlo, nhi)) break;
          v = std::max(v, nlo);
          vhi = nhi;
          if (v > vhi) break;
        }
        const i128 q = p + static_cast<i128>(v) * a;
        if (reach_lower(q, rest) > st.best) continue;
        m[l] = v;
        dfs_min(l + 1, q, m, st);
      }
      m[l] = 0;
      return;
    }
    for (std::int64_t v = -b; v <= b; ++v) {
      const i128 q = p + static_cast<i128>(v) * a;
      if (reach_lower(q, rest) > st.best) continue;
      m[l] = v;
      dfs_min(l + 1, q, m, st);
    }
    m[l] = 0;
  }

  static void push_candidate(const Vec& m, std::vector<Vec>& out, std::size_t cap) {
    out.push_back(m);
    if (out.size() > cap) throw PrecisionExhausted("too many near-minimal candidates to separate");
  }

  void innermost_collect(std::size_t l, i128 p, std::int64_t lo, std::int64_t hi, i128 thr, Vec& m,
                         std::vector<Vec>& out, std::size_t cap) const {
    if (lo > hi) return;
    const i128 a = a_[l];
    if (kind_ == FormKind::Abs) {
      std::int64_t vlo, vhi;
      if (!solve_abs(p, a, thr, lo, hi, vlo, vhi)) return;
      for (std::int64_t v = vlo; v <= vhi; ++v) {
        m[l] = v;
        push_candidate(m, out, cap);
      }
    } else {
      for (std::int64_t v = lo; v <= hi; ++v) {
        if (key(p + static_cast<i128>(v) * a) <= thr) {
          m[l] = v;
          push_candidate(m, out, cap);
        }
      }
    }
    m[l] = 0;
  }

  void dfs_collect(std::size_t l, i128 p, i128 thr, Vec& m, std::vector<Vec>& out, std::size_t cap) const {
    if (l == n_ - 1) {
      innermost_collect(l, p, -bounds_[l], bounds_[l], thr, m, out, cap);
      return;
    }
    if (reach_lower(p, reach_[l]) > thr) return;
    const i128 a = a_[l];
    const i128 rest = reach_[l + 1];
    const std::int64_t b = bounds_[l];
    std::int64_t vlo = -b, vhi = b;
    if (kind_ == FormKind::Abs && !solve_abs(p, a, thr + rest, -b, b, vlo, vhi)) return;
    for (std::int64_t v = vlo; v <= vhi; ++v) {
      const i128 q = p + static_cast<i128>(v) * a;
      if (reach_lower(q, rest) > thr) continue;
      m[l] = v;
      dfs_collect(l + 1, q, thr, m, out, cap);
    }
    m[l] = 0;
  }

  std::size_t n_;
  std::vector<i128> a_;
  i128 modulus_;
  Vec bounds_;
  FormKind kind_;
  std::vector<i128> reach_;
};

// ---------------------------------------------------------------------------
// Meet in the middle (Abs only): coordinates [0, h) are enumerated, the
// partial sums of [h, n) are tabulated and sorted.

class MeetInTheMiddle {
 public:
  struct Entry {
    i128 sum;
    std::uint64_t index;  // mixed radix, first coordinate most significant
  };

  MeetInTheMiddle(const FixedPointForm& form, std::span<const std::int64_t> bounds, std::size_t split)
      : n_(bounds.size()), h_(split), a_(form.coeff), bounds_(bounds.begin(), bounds.end()) {
    std::size_t size = 1;
    for (std::size_t j = h_; j < n_; ++j) size *= static_cast<std::size_t>(2 * bounds_[j] + 1);
    table_.reserve(size);
    Vec y(n_ - h_);
    i128 s = 0;
    for (std::size_t j = h_; j < n_; ++j) {
      y[j - h_] = -bounds_[j];
      s += static_cast<i128>(-bounds_[j]) * a_[j];
    }
    for (std::uint64_t idx = 0; idx < size; ++idx) {
      table_.push_back({s, idx});
      // odometer increment, last coordinate fastest
      for (std::size_t j = n_; j-- > h_;) {
        if (y[j - h_] < bounds_[j]) {
          ++y[j - h_];
          s += a_[j];
          break;
        }
        s -= static_cast<i128>(2 * bounds_[j]) * a_[j];
        y[j - h_] = -bounds_[j];
      }
    }
    std::stable_sort(table_.begin(), table_.end(), [](const Entry& x, const Entry& y) { return x.sum < y.sum; });
  }

  // Split index minimizing the larger of the two halves, or 0 when no split
  // keeps the table within kMaxMitmTable entries.
  static std::size_t choose_split(std::span<const std::int64_t> bounds) {
    const std::size_t n = bounds.size();
    std::size_t best = 0;
    long double best_cost = 0;
    for (std::size_t h = 1; h < n; ++h) {
      long double left = 1, right = 1;
      for (std::size_t j = 0; j < h; ++j) left *= 2.0L * bounds[j] + 1;
      for (std::size_t j = h; j < n; ++j) right *= 2.0L * bounds[j] + 1;
      if (right > static_cast<long double>(kMaxMitmTable)) continue;
      const long double cost = std::max(left, right);
      if (best == 0 || cost < best_cost) {
        best = h;
        best_cost = cost;
      }
    }
    return best;
  }

  // Units: 0 is x = 0; the others fix (k, v) with k < h.
  std::size_t unit_count() const {
    std::size_t c = 1;
    for (std::size_t k = 0; k < h_; ++k) c += static_cast<std::size_t>(bounds_[k]);
    return c;
  }

  void run_min_unit(std::size_t index, MinState& st) const {
    if (index == 0) {
      for (const Entry& e : table_) {
        const i128 kk = iabs(e.sum);
        if (kk > st.best) continue;
        Vec m(n_, 0);
        decode(e.index, m);
        if (canonical_nonzero(m)) st.offer(kk, m);
      }
      return;
    }
    for_each_x(index, [&](const Vec& x, i128 s1) {
      const i128 target = -s1;
      auto pos = lower_bound(target);
      auto consider = [&](std::size_t group_first) {
        const Entry& e = table_[group_first];
        const i128 kk = iabs(s1 + e.sum);
        if (kk > st.best) return;
        Vec m = x;
        decode(e.index, m);
        st.offer(kk, m);
      };
      if (pos < table_.size()) consider(pos);
      if (pos > 0) consider(lower_bound(table_[pos - 1].sum));
    });
  }

  void run_collect_unit(std::size_t index, i128 thr, std::vector<Vec>& out, std::size_t cap) const {
    auto push = [&](Vec m) {
      out.push_back(std::move(m));
      if (out.size() > cap) throw PrecisionExhausted("too many near-minimal candidates to separate");
    };
    if (index == 0) {
      for (auto it = table_.begin() + static_cast<std::ptrdiff_t>(lower_bound(-thr)); it != table_.end() && it->sum <= thr; ++it) {
        Vec m(n_, 0);
        decode(it->index, m);
        if (canonical_nonzero(m)) push(std::move(m));
      }
      return;
    }
    for_each_x(index, [&](const Vec& x, i128 s1) {
      const i128 target = -s1;
      for (std::size_t p = lower_bound(target - thr); p < table_.size() && table_[p].sum <= target + thr; ++p) {
        Vec m = x;
        decode(table_[p].index, m);
        push(std::move(m));
      }
    });
  }

 private:
  std::size_t lower_bound(i128 value) const {
    auto it = std::lower_bound(table_.begin(), table_.end(), value,
                               [](const Entry& e, i128 v) { return e.sum < v; });
    return static_cast<std::size_t>(it - table_.begin());
  }

  void decode(std::uint64_t idx, Vec& m) const {
    for (std::size_t j = n_; j-- > h_;) {
      const std::uint64_t radix = static_cast<std::uint64_t>(2 * bounds_[j] + 1);
      m[j] = static_cast<std::int64_t>(idx % radix) - bounds_[j];
      idx /= radix;
    }
  }

  // Calls f(x, S1(x)) for each x in unit `index` (>= 1): x_0..x_{k-1} = 0,
  // x_k = v, x_{k+1}..x_{h-1} free.
  template <class F>
  void for_each_x(std::size_t index, F&& f) const {
    --index;
    std::size_t k = 0;
    std::int64_t v = 0;
    for (std::size_t kk = h_; kk-- > 0;) {
      if (index < static_cast<std::size_t>(bounds_[kk])) {
        k = kk;
        v = static_cast<std::int64_t>(index) + 1;
        break;
      }
      index -= static_cast<std::size_t>(bounds_[kk]);
    }
    Vec x(n_, 0);
    x[k] = v;
    i128 s = static_cast<i128>(v) * a_[k];
    for (std::size_t j = k + 1; j < h_; ++j) {
      x[j] = -bounds_[j];
      s += static_cast<i128>(-bounds_[j]) * a_[j];
    }
    for (;;) {
      f(x, s);
      std::size_t j = h_;
      for (; j-- > k + 1;) {
        if (x[j] < bounds_[j]) {
          ++x[j];
          s += a_[j];
          break;
        }
        s -= static_cast<i128>(2 * bounds_[j]) * a_[j];
        x[j] = -bounds_[j];
      }
      if (j == k || j > h_) return;  // odometer wrapped
    }
  }

  std::size_t n_;
  std::size_t h_;
  std::vector<i128> a_;
  Vec bounds_;
  std::vector<Entry> table_;
};

template <class Engine>
SearchHit run_min(const Engine& engine, unsigned threads) {
  MinState global;
  std::mutex mutex;
  parallel_for(engine.unit_count(), threads, [&](std::size_t unit) {
    MinState local;
    {
      std::lock_guard lock(mutex);
      local = global;
    }
    engine.run_min_unit(unit, local);
    std::lock_guard lock(mutex);
    if (!local.best_m.empty()) global.offer(local.best, local.best_m);
  });
  if (global.best_m.empty()) throw DomainError("the box contains no nonzero integer point");
  return {global.best, std::move(global.best_m)};
}

template <class Engine>
std::vector<Vec> run_collect(const Engine& engine, i128 thr, unsigned threads, std::size_t cap) {
  std::vector<Vec> all;
  std::mutex mutex;
  parallel_for(engine.unit_count(), threads, [&](std::size_t unit) {
    std::vector<Vec> local;
    engine.run_collect_unit(unit, thr, local, cap);
    std::lock_guard lock(mutex);
    all.insert(all.end(), std::make_move_iterator(local.begin()), std::make_move_iterator(local.end()));
    if (all.size() > cap) throw PrecisionExhausted("too many near-minimal candidates to separate");
  });
  std::sort(all.begin(), all.end(), [](const Vec& a, const Vec& b) { return lex_less(a, b); });
  return all;
}

bool has_nonzero_point(std::span<const std::int64_t> bounds) {
  return std::any_of(bounds.begin(), bounds.end(), [](std::int64_t b) { return b > 0; });
}

}  // namespace

FixedPointForm make_fixed_point(std::span<const Scalar> values, std::span<const std::int64_t> bounds) {
  const Integer limit = Integer(1) << 122;
  FixedPointForm form;
  const bool all_exact = std::all_of(values.begin(), values.end(), [](const Scalar& s) { return s.is_exact(); });
  if (all_exact) {
    Integer den = 1;
    for (const Scalar& s : values) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), s.exact().get_den_mpz_t());
    Integer total = den;
    std::vector<Integer> scaled;
    for (std::size_t j = 0; j < values.size(); ++j) {
      const Rational& q = values[j].exact();
      scaled.push_back(q.get_num() * (den / q.get_den()));
      total += Integer(bounds[j]) * ::abs(scaled.back());
    }
    if (total < limit) {
      for (const Integer& c : scaled) form.coeff.push_back(to_i128(c));
      form.modulus = to_i128(den);
      form.exact = true;
      return form;
    }
  }
  Rational weight = 1;
  for (std::size_t j = 0; j < values.size(); ++j) {
    weight += Rational(bounds[j]) * std::max(Rational(::abs(values[j].lower())), Rational(::abs(values[j].upper())));
  }
  long shift = 122 - static_cast<long>(mpz_sizeinbase(ceil_of(weight).get_mpz_t(), 2));
  for (const Scalar& s : values) {
    const Rational width = s.upper() - s.lower();
    if (sgn(width) == 0) continue;
    const Integer inv = floor_of(Rational(1 / width));
    if (inv == 0) throw PrecisionExhausted("enclosure " + s.to_string() + " is too wide for a fixed-point search");
    shift = std::min(shift, static_cast<long>(mpz_sizeinbase(inv.get_mpz_t(), 2)) - 1);
  }
  if (shift < 16) throw PrecisionExhausted("enclosures too wide for a fixed-point search over this box");
  const Integer scale = Integer(1) << static_cast<mp_bitcnt_t>(shift);
  for (const Scalar& s : values) {
    const Integer a = nearest_int(Rational(s.midpoint() * scale));
    if (::abs(Rational(s.upper() * scale - a)) > 1 || ::abs(Rational(a - s.lower() * scale)) > 1) {
      throw PrecisionExhausted("fixed-point rounding error exceeds one unit");
    }
    form.coeff.push_back(to_i128(a));
  }
  form.modulus = to_i128(scale);
  form.exact = false;
  return form;
}

SearchHit search_min(const FixedPointForm& form, std::span<const std::int64_t> bounds, FormKind kind,
                     const SearchConfig& config) {
  if (bounds.empty() || !has_nonzero_point(bounds)) throw DomainError("the box contains no nonzero integer point");
  if (config.meet_in_the_middle && kind == FormKind::Abs && bounds.size() >= 2) {
    if (std::size_t h = MeetInTheMiddle::choose_split(bounds); h != 0) {
      return run_min(MeetInTheMiddle(form, bounds, h), config.threads);
    }
  }
  return run_min(Searcher(form, bounds, kind), config.threads);
}

std::vector<std::vector<std::int64_t>> search_collect(const FixedPointForm& form,
                                                      std::span<const std::int64_t> bounds, FormKind kind,
                                                      i128 threshold, const SearchConfig& config) {
  if (bounds.empty() || !has_nonzero_point(bounds)) throw DomainError("the box contains no nonzero integer point");
  if (config.meet_in_the_middle && kind == FormKind::Abs && bounds.size() >= 2) {
    if (std::size_t h = MeetInTheMiddle::choose_split(bounds); h != 0) {
      return run_collect(MeetInTheMiddle(form, bounds, h), threshold, config.threads, config.candidate_cap);
    }
  }
  return run_collect(Searcher(form, bounds, kind), threshold, config.threads, config.candidate_cap);
}

}  // namespace kronecker::detail
