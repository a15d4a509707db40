#include "sigclust/tensor_signature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sigclust::tensor {

namespace {

std::size_t level_size(int dimension, int k) {
    std::size_t n = 1;
    for (int i = 0; i < k; ++i) n *= static_cast<std::size_t>(dimension);
    return n;
}

void require_compatible(const TensorSeries& a, const TensorSeries& b) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("tensor: dimension mismatch (" +
                                    std::to_string(a.dimension()) + " vs " +
                                    std::to_string(b.dimension()) + ")");
    if (a.depth() != b.depth())
        throw std::invalid_argument("tensor: depth mismatch (" + std::to_string(a.depth()) +
                                    " vs " + std::to_string(b.depth()) + ")");
}

// dst += coef * src, level by level
void accumulate(TensorSeries& dst, double coef, const TensorSeries& src) {
    for (int k = 0; k <= dst.depth(); ++k) {
        auto d = dst.level(k);
        const auto s = src.level(k);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] += coef * s[i];
    }
}

}  // namespace

std::size_t word_index(int dimension, const Word& w) {
    std::size_t idx = 0;
    for (int letter : w) {
        if (letter < 1 || letter > dimension)
            throw std::invalid_argument("word: letter " + std::to_string(letter) +
                                        " outside alphabet {1.." + std::to_string(dimension) + "}");
        idx = idx * static_cast<std::size_t>(dimension) + static_cast<std::size_t>(letter - 1);
    }
    return idx;
}

Word word_at(int dimension, int length, std::size_t index) {
    if (length < 0) throw std::invalid_argument("word: negative length");
    Word w(static_cast<std::size_t>(length));
    for (int pos = length - 1; pos >= 0; --pos) {
        w[static_cast<std::size_t>(pos)] =
            static_cast<int>(index % static_cast<std::size_t>(dimension)) + 1;
        index /= static_cast<std::size_t>(dimension);
    }
    if (index != 0) throw std::invalid_argument("word: index out of range for length");
    return w;
}

TensorSeries::TensorSeries(int dimension, int depth) : dimension_(dimension), depth_(depth) {
    if (dimension < 1) throw std::invalid_argument("TensorSeries: dimension must be positive");
    if (depth < 0) throw std::invalid_argument("TensorSeries: depth must be non-negative");
    levels_.resize(static_cast<std::size_t>(depth) + 1);
    for (int k = 0; k <= depth; ++k)
        levels_[static_cast<std::size_t>(k)].assign(level_size(dimension, k), 0.0);
}

TensorSeries TensorSeries::identity(int dimension, int depth) {
    TensorSeries s(dimension, depth);
    s.scalar() = 1.0;
    return s;
}

std::span<const double> TensorSeries::level(int k) const {
    if (k < 0 || k > depth_) throw std::out_of_range("TensorSeries: level out of range");
    return levels_[static_cast<std::size_t>(k)];
}

std::span<double> TensorSeries::level(int k) {
    if (k < 0 || k > depth_) throw std::out_of_range("TensorSeries: level out of range");
    return levels_[static_cast<std::size_t>(k)];
}

double TensorSeries::coefficient(const Word& w) const {
    const int k = static_cast<int>(w.size());
    if (k > depth_) throw std::out_of_range("TensorSeries: word longer than depth");
    return levels_[static_cast<std::size_t>(k)][word_index(dimension_, w)];
}

double& TensorSeries::coefficient(const Word& w) {
    const int k = static_cast<int>(w.size());
    if (k > depth_) throw std::out_of_range("TensorSeries: word longer than depth");
    return levels_[static_cast<std::size_t>(k)][word_index(dimension_, w)];
}

bool approx_equal(const TensorSeries& a, const TensorSeries& b, double tol) {
    if (a.dimension() != b.dimension() || a.depth() != b.depth()) return false;
    for (int k = 0; k <= a.depth(); ++k) {
        const auto la = a.level(k);
        const auto lb = b.level(k);
        for (std::size_t i = 0; i < la.size(); ++i)
            if (std::abs(la[i] - lb[i]) > tol) return false;
    }
    return true;
}

TensorSeries tensor_product(const TensorSeries& a, const TensorSeries& b) {
    require_compatible(a, b);
    TensorSeries out(a.dimension(), a.depth());
    for (int n = 0; n <= a.depth(); ++n) {
        auto dst = out.level(n);
        for (int i = 0; i <= n; ++i) {
            const auto lhs = a.level(i);
            const auto rhs = b.level(n - i);
            std::size_t idx = 0;
            for (const double u : lhs)
                for (const double v : rhs) dst[idx++] += u * v;
        }
    }
    return out;
}

PiecewisePath::PiecewisePath(std::vector<double> times, std::vector<double> values, int dimension)
    : dimension_(dimension), times_(std::move(times)), values_(std::move(values)) {
    if (dimension_ < 1) throw std::invalid_argument("PiecewisePath: dimension must be positive");
    if (times_.size() < 2) throw std::invalid_argument("PiecewisePath: need at least 2 samples");
    if (values_.size() != times_.size() * static_cast<std::size_t>(dimension_))
        throw std::invalid_argument("PiecewisePath: values size does not match samples");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1]))
            throw std::invalid_argument("PiecewisePath: times must be strictly increasing");
}

std::span<const double> PiecewisePath::value(std::size_t i) const {
    return {values_.data() + i * static_cast<std::size_t>(dimension_),
            static_cast<std::size_t>(dimension_)};
}

std::vector<double> PiecewisePath::displacement(std::size_t segment) const {
    const auto from = value(segment);
    const auto to = value(segment + 1);
    std::vector<double> d(static_cast<std::size_t>(dimension_));
    for (std::size_t c = 0; c < d.size(); ++c) d[c] = to[c] - from[c];
    return d;
}

std::vector<double> PiecewisePath::evaluate(double t) const {
    if (t < times_.front() || t > times_.back())
        throw std::out_of_range("PiecewisePath: time outside [t_1, t_n]");
    if (t == times_.back()) {
        const auto last = value(size() - 1);
        return {last.begin(), last.end()};
    }
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
    const double w = (t - times_[i]) / (times_[i + 1] - times_[i]);
    const auto lo = value(i);
    const auto hi = value(i + 1);
    std::vector<double> out(static_cast<std::size_t>(dimension_));
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = lo[c] + (hi[c] - lo[c]) * w;
    return out;
}

TensorSeries segment_signature(std::span<const double> displacement, int depth) {
    const int d = static_cast<int>(displacement.size());
    TensorSeries s = TensorSeries::identity(d, depth);
    if (depth >= 1) {
        auto first = s.level(1);
        std::copy(displacement.begin(), displacement.end(), first.begin());
    }
    for (int k = 2; k <= depth; ++k) {
        const auto prev = s.level(k - 1);
        auto cur = s.level(k);
        const double inv = 1.0 / static_cast<double>(k);
        std::size_t idx = 0;
        for (const double p : prev)
            for (const double x : displacement) cur[idx++] = p * x * inv;
    }
    return s;
}

TensorSeries chen_concat(const TensorSeries& a, const TensorSeries& b) {
    require_compatible(a, b);
    constexpr double kUnitTol = 1e-12;
    if (std::abs(a.scalar() - 1.0) > kUnitTol || std::abs(b.scalar() - 1.0) > kUnitTol)
        throw std::invalid_argument("chen_concat: operands must carry 1 at level 0");
    return tensor_product(a, b);
}

TensorSeries path_signature(const PiecewisePath& path, int depth) {
    if (depth < 0) throw std::invalid_argument("path_signature: depth must be non-negative");
    TensorSeries sig = segment_signature(path.displacement(0), depth);
    for (std::size_t s = 1; s < path.segments(); ++s)
        sig = chen_concat(sig, segment_signature(path.displacement(s), depth));
    return sig;
}

TensorSeries log_signature(const TensorSeries& s) {
    const double lambda0 = s.scalar();
    if (!(lambda0 > 0.0))
        throw std::invalid_argument("log_signature: level-0 entry must be positive");

    // x = s / lambda0 - 1 has zero scalar part, so x^n vanishes above level n
    // and the series stops at n = depth.
    TensorSeries x(s.dimension(), s.depth());
    for (int k = 1; k <= s.depth(); ++k) {
        const auto src = s.level(k);
        auto dst = x.level(k);
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] / lambda0;
    }

    TensorSeries out(s.dimension(), s.depth());
    out.scalar() = std::log(lambda0);
    TensorSeries power = x;
    accumulate(out, 1.0, power);
    for (int n = 2; n <= s.depth(); ++n) {
        power = tensor_product(power, x);
        const double coef = (n % 2 == 0 ? -1.0 : 1.0) / static_cast<double>(n);
        accumulate(out, coef, power);
    }
    return out;
}

TensorSeries tensor_exp(const TensorSeries& x) {
    constexpr double kZeroTol = 1e-12;
    if (std::abs(x.scalar()) > kZeroTol)
        throw std::invalid_argument("tensor_exp: level-0 entry must be zero");
    TensorSeries out = TensorSeries::identity(x.dimension(), x.depth());
    TensorSeries term = x;
    accumulate(out, 1.0, term);
    for (int n = 2; n <= x.depth(); ++n) {
        term = tensor_product(term, x);
        // keep term = x^n / n! by folding 1/n into each step
        for (int k = 0; k <= term.depth(); ++k) {
            auto lvl = term.level(k);
            for (double& v : lvl) v /= static_cast<double>(n);
        }
        accumulate(out, 1.0, term);
    }
    return out;
}

TensorSeries factorial_scale(const TensorSeries& s) {
    TensorSeries out = s;
    double factorial = 1.0;
    for (int k = 2; k <= s.depth(); ++k) {
        factorial *= static_cast<double>(k);
        auto lvl = out.level(k);
        for (double& v : lvl) v *= factorial;
    }
    return out;
}

namespace {

// Moebius function by trial division; arguments here are tiny (level indices).
int moebius(int n) {
    int primes = 0;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            ++primes;
        }
    }
    if (n > 1) ++primes;
    return primes % 2 == 0 ? 1 : -1;
}

std::uint64_t ipow(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

TermCounts term_counts(int dimension, int depth) {
    if (dimension < 1) throw std::invalid_argument("term_counts: dimension must be positive");
    if (depth < 0) throw std::invalid_argument("term_counts: depth must be non-negative");
    TermCounts out{0, 0};
    for (int k = 1; k <= depth; ++k) {
        out.signature_size += ipow(static_cast<std::uint64_t>(dimension), k);
        // Witt number W(d, k) = (1/k) sum over divisors e of k of mu(e) d^{k/e}
        std::int64_t witt = 0;
        for (int e = 1; e <= k; ++e) {
            if (k % e != 0) continue;
            witt += static_cast<std::int64_t>(moebius(e)) *
                    static_cast<std::int64_t>(ipow(static_cast<std::uint64_t>(dimension), k / e));
        }
        out.logsignature_size += static_cast<std::uint64_t>(witt / k);
    }
    return out;
}

std::vector<double> flatten(const TensorSeries& s) {
    std::vector<double> out;
    std::size_t total = 0;
    for (int k = 1; k <= s.depth(); ++k) total += s.level(k).size();
    out.reserve(total);
    for (int k = 1; k <= s.depth(); ++k) {
        const auto lvl = s.level(k);
        out.insert(out.end(), lvl.begin(), lvl.end());
    }
    return out;
}

}  // namespace sigclust::tensor
