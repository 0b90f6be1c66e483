// Coset enumeration. The table has one column per generator and one per
// inverse; column 2g is x_g, column 2g+1 is x_g^-1. Coincidences are
// handled with a union-find forwarding array (Holt, Handbook of CGT, 5.1).

#include <algorithm>
#include <numeric>

#include "kmfg/fpgroup.hpp"

namespace kmfg {

namespace {

constexpr int kUndef = -1;

int column(const Letter& l) { return 2 * l.gen + (l.exp < 0 ? 1 : 0); }
int inv(int col) { return col ^ 1; }

using Cols = std::vector<int>;

Cols to_cols(const FpWord& w) {
  Cols out;
  out.reserve(w.size());
  for (const auto& l : w) out.push_back(column(l));
  return out;
}

class CosetTable {
 public:
  CosetTable(int ncols, std::size_t cap) : ncols_(ncols), cap_(cap) { add_row(); }

  enum class Outcome { Ok, Full };

  bool live(int c) const { return fwd_[static_cast<std::size_t>(c)] == c; }
  int size() const { return static_cast<int>(fwd_.size()); }
  int live_count() const { return live_; }
  int& at(int c, int x) { return table_[static_cast<std::size_t>(c) * static_cast<std::size_t>(ncols_) + static_cast<std::size_t>(x)]; }
  bool coincided() const { return coincided_; }
  std::size_t changes() const { return changes_; }
  void clear_coincided() { coincided_ = false; }

  std::vector<std::pair<int, int>>& deductions() { return deductions_; }
  void record_deductions(bool on) { recording_ = on; }

  // new coset as the image of c under x
  Outcome define(int c, int x) {
    if (static_cast<std::size_t>(size()) >= cap_) return Outcome::Full;
    const int d = add_row();
    set(c, x, d);
    return Outcome::Ok;
  }

  // Trace w from c forwards and backwards, defining cosets to close the gap.
  Outcome scan_and_fill(int c, const Cols& w) {
    const int len = static_cast<int>(w.size());
    int f = c, b = c, i = 0, j = len - 1;
    for (;;) {
      while (i <= j && at(f, w[static_cast<std::size_t>(i)]) != kUndef) f = at(f, w[static_cast<std::size_t>(i++)]);
      if (i > j) {
        if (f != b) coincidence(f, b);
        return Outcome::Ok;
      }
      while (j >= i && at(b, inv(w[static_cast<std::size_t>(j)])) != kUndef) b = at(b, inv(w[static_cast<std::size_t>(j--)]));
      if (j < i) {
        coincidence(f, b);
        return Outcome::Ok;
      }
      if (i == j) {
        set(f, w[static_cast<std::size_t>(i)], b);
        return Outcome::Ok;
      }
      if (define(f, w[static_cast<std::size_t>(i)]) == Outcome::Full) return Outcome::Full;
    }
  }

  // Same trace without definitions: records a deduction or a coincidence
  // when the gap is closed or a single entry wide.
  void scan(int c, const Cols& w) {
    const int len = static_cast<int>(w.size());
    int f = c, b = c, i = 0, j = len - 1;
    while (i <= j && at(f, w[static_cast<std::size_t>(i)]) != kUndef) f = at(f, w[static_cast<std::size_t>(i++)]);
    if (i > j) {
      if (f != b) coincidence(f, b);
      return;
    }
    while (j >= i && at(b, inv(w[static_cast<std::size_t>(j)])) != kUndef) b = at(b, inv(w[static_cast<std::size_t>(j--)]));
    if (j < i)
      coincidence(f, b);
    else if (i == j)
      set(f, w[static_cast<std::size_t>(i)], b);
  }

  bool complete(int c) {
    for (int x = 0; x < ncols_; ++x)
      if (at(c, x) == kUndef) return false;
    return true;
  }

  bool closes(int c, const Cols& w) {
    int f = c;
    for (int x : w) {
      f = at(f, x);
      if (f == kUndef) return false;
    }
    return f == c;
  }

  // Renumber live cosets 0..k-1 in index order; returns the old -> new map.
  std::vector<int> compact() {
    std::vector<int> renum(fwd_.size(), kUndef);
    int k = 0;
    for (int c = 0; c < size(); ++c)
      if (live(c)) renum[static_cast<std::size_t>(c)] = k++;
    std::vector<int> next(static_cast<std::size_t>(k) * static_cast<std::size_t>(ncols_), kUndef);
    for (int c = 0; c < size(); ++c) {
      if (!live(c)) continue;
      for (int x = 0; x < ncols_; ++x) {
        const int t = at(c, x);
        next[static_cast<std::size_t>(renum[static_cast<std::size_t>(c)]) * static_cast<std::size_t>(ncols_) +
             static_cast<std::size_t>(x)] = t == kUndef ? kUndef : renum[static_cast<std::size_t>(t)];
      }
    }
    table_ = std::move(next);
    fwd_.resize(static_cast<std::size_t>(k));
    std::iota(fwd_.begin(), fwd_.end(), 0);
    deductions_.clear();
    return renum;
  }

 private:
  int add_row() {
    const int d = size();
    fwd_.push_back(d);
    table_.resize(table_.size() + static_cast<std::size_t>(ncols_), kUndef);
    ++live_;
    return d;
  }

  void set(int c, int x, int d) {
    at(c, x) = d;
    at(d, inv(x)) = c;
    ++changes_;
    if (recording_) deductions_.emplace_back(c, x);
  }

  int rep(int c) {
    int r = c;
    while (fwd_[static_cast<std::size_t>(r)] != r) r = fwd_[static_cast<std::size_t>(r)];
    while (fwd_[static_cast<std::size_t>(c)] != r) {
      const int next = fwd_[static_cast<std::size_t>(c)];
      fwd_[static_cast<std::size_t>(c)] = r;
      c = next;
    }
    return r;
  }

  void merge(int k, int l, std::vector<int>& queue) {
    k = rep(k);
    l = rep(l);
    if (k == l) return;
    if (l < k) std::swap(k, l);
    fwd_[static_cast<std::size_t>(l)] = k;
    queue.push_back(l);
    --live_;
  }

  void coincidence(int a, int b) {
    coincided_ = true;
    std::vector<int> queue;
    merge(a, b, queue);
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const int e = queue[q];
      for (int x = 0; x < ncols_; ++x) {
        const int f = at(e, x);
        if (f == kUndef) continue;
        if (at(f, inv(x)) == e) at(f, inv(x)) = kUndef;
        const int e1 = rep(e), f1 = rep(f);
        if (at(e1, x) != kUndef) {
          merge(f1, at(e1, x), queue);
        } else if (at(f1, inv(x)) != kUndef) {
          merge(e1, at(f1, inv(x)), queue);
        } else {
          set(e1, x, f1);
        }
      }
    }
  }

  int ncols_;
  std::size_t cap_;
  int live_ = 0;
  bool coincided_ = false;
  bool recording_ = false;
  std::size_t changes_ = 0;
  std::vector<int> table_;
  std::vector<int> fwd_;
  std::vector<std::pair<int, int>> deductions_;
};

struct Problem {
  int ncols;
  std::vector<Cols> relators;
  std::vector<Cols> subgroup;
};

bool verified(CosetTable& t, const Problem& p) {
  for (int c = 0; c < t.size(); ++c) {
    if (!t.live(c) || !t.complete(c)) return false;
    for (const auto& r : p.relators)
      if (!t.closes(c, r)) return false;
  }
  for (const auto& w : p.subgroup)
    if (!t.closes(0, w)) return false;
  return true;
}

// Scan every relator at every live coset (and the subgroup words at 0)
// until nothing changes.
void saturate(CosetTable& t, const Problem& p) {
  for (;;) {
    t.clear_coincided();
    const auto before = t.changes();
    for (const auto& w : p.subgroup)
      if (t.live(0)) t.scan(0, w);
    for (int c = 0; c < t.size(); ++c)
      for (const auto& r : p.relators) {
        if (!t.live(c)) break;
        t.scan(c, r);
      }
    if (!t.coincided() && t.changes() == before) return;
  }
}

EnumerationResult hlt(const Problem& p, std::size_t cap) {
  CosetTable t(p.ncols, cap);
  const auto relieve = [&](int& c) {
    // lookahead, then reclaim dead rows
    saturate(t, p);
    int resumed = 0;
    const auto renum = t.compact();
    for (int k = 0; k < c && k < static_cast<int>(renum.size()); ++k)
      if (renum[static_cast<std::size_t>(k)] != kUndef) ++resumed;
    c = resumed;
    return static_cast<std::size_t>(t.size()) < cap;
  };

  int c = 0;
  for (std::size_t k = 0; k < p.subgroup.size();) {
    if (t.scan_and_fill(0, p.subgroup[k]) == CosetTable::Outcome::Full) {
      if (!relieve(c)) return EnumerationResult::exhausted(static_cast<std::int64_t>(cap));
      continue;
    }
    ++k;
  }
  while (c < t.size()) {
    bool full = false;
    for (const auto& r : p.relators) {
      if (!t.live(c)) break;
      if (t.scan_and_fill(c, r) == CosetTable::Outcome::Full) {
        full = true;
        break;
      }
    }
    for (int x = 0; !full && x < p.ncols && t.live(c); ++x)
      if (t.at(c, x) == kUndef && t.define(c, x) == CosetTable::Outcome::Full) full = true;
    if (full) {
      if (!relieve(c)) return EnumerationResult::exhausted(static_cast<std::int64_t>(cap));
      continue;
    }
    ++c;
  }
  saturate(t, p);
  t.compact();
  if (!verified(t, p)) throw Error(ErrorCode::VerificationFailed, "coset table failed its final check");
  return EnumerationResult::finite(t.live_count());
}

EnumerationResult felsch(const Problem& p, std::size_t cap) {
  CosetTable t(p.ncols, cap);
  t.record_deductions(true);

  // cyclic conjugates of each relator and its inverse, grouped by first column
  std::vector<std::vector<Cols>> by_first(static_cast<std::size_t>(p.ncols));
  for (const auto& r : p.relators) {
    Cols rinv(r.rbegin(), r.rend());
    for (auto& x : rinv) x = inv(x);
    for (const Cols* w : std::initializer_list<const Cols*>{&r, &rinv})
      for (std::size_t s = 0; s < w->size(); ++s) {
        Cols conj(w->begin() + static_cast<std::ptrdiff_t>(s), w->end());
        conj.insert(conj.end(), w->begin(), w->begin() + static_cast<std::ptrdiff_t>(s));
        auto& bucket = by_first[static_cast<std::size_t>(conj.front())];
        if (std::find(bucket.begin(), bucket.end(), conj) == bucket.end()) bucket.push_back(std::move(conj));
      }
  }

  const auto process = [&] {
    for (;;) {
      while (!t.deductions().empty()) {
        const auto [c, x] = t.deductions().back();
        t.deductions().pop_back();
        if (!t.live(c)) continue;
        for (const auto& w : by_first[static_cast<std::size_t>(x)]) {
          if (!t.live(c)) break;
          t.scan(c, w);
        }
        const int d = t.at(c, x);
        if (d == kUndef || !t.live(d)) continue;
        for (const auto& w : by_first[static_cast<std::size_t>(inv(x))]) {
          if (!t.live(d)) break;
          t.scan(d, w);
        }
      }
      if (!t.coincided()) return;
      // the forwarding may have hidden consequences; rescan everything
      saturate(t, p);
    }
  };

  for (std::size_t k = 0; k < p.subgroup.size();) {
    if (t.scan_and_fill(0, p.subgroup[k]) == CosetTable::Outcome::Full) {
      process();
      t.compact();
      saturate(t, p);
      if (static_cast<std::size_t>(t.size()) >= cap) return EnumerationResult::exhausted(static_cast<std::int64_t>(cap));
      continue;
    }
    process();
    ++k;
  }

  int c = 0;
  for (;;) {
    int x = kUndef;
    for (; c < t.size(); ++c) {
      if (!t.live(c)) continue;
      for (int y = 0; y < p.ncols; ++y)
        if (t.at(c, y) == kUndef) {
          x = y;
          break;
        }
      if (x != kUndef) break;
    }
    if (x == kUndef) {
      const auto before = t.changes();
      const int live_before = t.live_count();
      saturate(t, p);
      process();
      if (t.changes() == before && t.live_count() == live_before) break;
      c = 0;
      continue;
    }
    if (t.define(c, x) == CosetTable::Outcome::Full) {
      t.compact();
      saturate(t, p);
      process();
      if (static_cast<std::size_t>(t.size()) >= cap) return EnumerationResult::exhausted(static_cast<std::int64_t>(cap));
      c = 0;
      continue;
    }
    process();
  }
  t.compact();
  if (!verified(t, p)) throw Error(ErrorCode::VerificationFailed, "coset table failed its final check");
  return EnumerationResult::finite(t.live_count());
}

}  // namespace

EnumerationResult todd_coxeter(const FpPresentation& p, const std::vector<FpWord>& subgroup, std::size_t max_cosets,
                               Strategy strategy) {
  if (max_cosets < 1) throw Error(ErrorCode::Usage, "coset cap must be at least 1");
  if (max_cosets > 50'000'000) throw Error(ErrorCode::Usage, "coset cap above 50000000 is not supported");
  Problem prob{2 * p.generator_count(), {}, {}};
  for (const auto& r : p.relators())
    if (!r.empty()) prob.relators.push_back(to_cols(r));
  for (const auto& w : subgroup) {
    for (const auto& l : w)
      if (l.gen < 0 || l.gen >= p.generator_count() || (l.exp != 1 && l.exp != -1))
        throw Error(ErrorCode::InvalidPresentation, "subgroup word uses generator index " + std::to_string(l.gen + 1) +
                                                        " outside 1.." + std::to_string(p.generator_count()));
    auto reduced = free_reduce(w);
    if (!reduced.empty()) prob.subgroup.push_back(to_cols(reduced));
  }
  return strategy == Strategy::Felsch ? felsch(prob, max_cosets) : hlt(prob, max_cosets);
}

}  // namespace kmfg
