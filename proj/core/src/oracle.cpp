#include "aggmc/oracle.hpp"

#include <cmath>
#include <future>
#include <sstream>
#include <vector>

#include <Eigen/LU>

#include "aggmc/error.hpp"
#include "aggmc/graph.hpp"

namespace aggmc {

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  void add(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void check_cap(Index alphabet, Index length) {
  double count = 1.0;
  for (Index i = 0; i < length; ++i) count *= static_cast<double>(alphabet);
  if (count > static_cast<double>(kEnumerationCap)) {
    std::ostringstream os;
    os << alphabet << "^" << length << " strings exceed the enumeration cap of " << kEnumerationCap;
    throw Error(ErrorCode::EnumerationTooLarge, os.str());
  }
}

std::vector<Index> others(Index m, Index special) {
  std::vector<Index> out;
  for (Index i = 0; i < m; ++i)
    if (i != special) out.push_back(i);
  return out;
}

// Visits every string of `length` symbols from `alphabet` whose first symbol
// is alphabet[first] (length >= 1) and hands the symbol
// sequence to `visit`.
template <class Visit>
void odometer(const std::vector<Index>& alphabet, Index length, std::size_t first, Visit&& visit) {
  std::vector<Index> digits(static_cast<std::size_t>(length), 0);
  std::vector<Index> word(static_cast<std::size_t>(length));
  if (length > 0) digits[0] = static_cast<Index>(first);
  const auto base = static_cast<Index>(alphabet.size());
  while (true) {
    for (std::size_t i = 0; i < word.size(); ++i) word[i] = alphabet[static_cast<std::size_t>(digits[i])];
    visit(word);
    bool advanced = false;
    for (std::size_t pos = word.size(); pos > 1 && !advanced;) {
      --pos;
      if (++digits[pos] < base)
        advanced = true;
      else
        digits[pos] = 0;
    }
    if (!advanced) return;
  }
}

// Sums visit(word) over all words of `length` symbols, splitting the work by
// first symbol and merging partial sums in symbol order.
template <class Term>
double enumerate(const std::vector<Index>& alphabet, Index length, Term term) {
  if (length == 0) return term(std::vector<Index>{});
  std::vector<std::future<CompensatedSum>> parts;
  for (std::size_t first = 0; first < alphabet.size(); ++first) {
    parts.push_back(std::async(std::launch::async, [&, first] {
      CompensatedSum s;
      odometer(alphabet, length, first, [&](const std::vector<Index>& word) { s.add(term(word)); });
      return s;
    }));
  }
  CompensatedSum total;
  for (auto& part : parts) total.add(part.get());
  return total.value();
}

// P(special -> w_1 -> ... -> w_L [-> special])
double path(const Matrix& p, Index special, const std::vector<Index>& word, bool close) {
  double prob = 1.0;
  Index at = special;
  for (Index s : word) {
    prob *= p(at, s);
    at = s;
  }
  if (close) prob *= p(at, special);
  return prob;
}

}  // namespace

double pk_enumeration(const TransitionMatrix& matrix, Index k, Index special) {
  const Index m = matrix.size();
  if (special < 0 || special >= m) throw Error(ErrorCode::InvalidSymbol, "special symbol out of range");
  if (k < 0) throw Error(ErrorCode::UnreachableRun, "negative run length");
  check_cap(m - 1, k);
  const auto alphabet = others(m, special);
  const Matrix& p = matrix.entries();
  const double num = enumerate(alphabet, k, [&](const auto& w) { return path(p, special, w, true); });
  const double den = enumerate(alphabet, k, [&](const auto& w) { return path(p, special, w, false); });
  if (!(den > 0.0)) throw Error(ErrorCode::UnreachableRun, "the conditioning run has probability zero");
  return num / den;
}

double pmn_enumeration(const TransitionMatrix& matrix, Index m, Index n, Index special) {
  const Index size = matrix.size();
  if (special < 0 || special >= size) throw Error(ErrorCode::InvalidSymbol, "special symbol out of range");
  if (m < 0 || n < 0) throw Error(ErrorCode::UnreachableEvent, "m and n must be nonnegative");
  check_cap(size - 1, m + n + 1);
  const auto alphabet = others(size, special);
  const Matrix& p = matrix.entries();

  // r: special, m others, special, n others, special
  const double r = enumerate(alphabet, m + n, [&](const std::vector<Index>& w) {
    const std::vector<Index> left(w.begin(), w.begin() + m);
    const std::vector<Index> right(w.begin() + m, w.end());
    return path(p, special, left, true) * path(p, special, right, true);
  });
  // s: special, m + n + 1 others, special
  const double s = enumerate(alphabet, m + n + 1, [&](const auto& w) { return path(p, special, w, true); });
  if (!(r + s > 0.0)) throw Error(ErrorCode::UnreachableEvent, "the conditioning event has probability zero");
  return r / (r + s);
}

Vector stationary_distribution(const TransitionMatrix& matrix) {
  const Matrix& p = matrix.entries();
  if (!classify(p).is_irreducible)
    throw Error(ErrorCode::ReducibleChain, "the chain is reducible; its stationary law is not unique");
  const Index m = p.rows();
  Matrix a = p.transpose() - Matrix::Identity(m, m);
  a.row(m - 1).setOnes();
  Vector b = Vector::Zero(m);
  b(m - 1) = 1.0;
  Vector pi = a.fullPivLu().solve(b);
  pi = pi.cwiseMax(0.0);
  return pi / pi.sum();
}

}  // namespace aggmc
