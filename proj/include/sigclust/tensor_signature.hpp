#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sigclust::tensor {

// A word over the alphabet {1..d}; the empty word has length 0.
// Words of equal length are ordered lexicographically and index the dense
// coefficient blocks below.
using Word = std::vector<int>;

// Position of `w` within the lexicographic enumeration of length-|w| words.
std::size_t word_index(int dimension, const Word& w);

// Inverse of word_index for the given length.
Word word_at(int dimension, int length, std::size_t index);

// Element of the tensor algebra over R^d truncated at `depth`: one dense block
// per level k = 0..depth with d^k coefficients in word order. Signatures carry
// 1 in level 0, log-signatures carry 0.
class TensorSeries {
public:
    TensorSeries(int dimension, int depth);

    // Multiplicative unit: level 0 set to 1, everything else 0.
    static TensorSeries identity(int dimension, int depth);

    int dimension() const { return dimension_; }
    int depth() const { return depth_; }

    std::span<const double> level(int k) const;
    std::span<double> level(int k);

    double scalar() const { return levels_[0][0]; }
    double& scalar() { return levels_[0][0]; }

    double coefficient(const Word& w) const;
    double& coefficient(const Word& w);

private:
    int dimension_;
    int depth_;
    std::vector<std::vector<double>> levels_;
};

bool approx_equal(const TensorSeries& a, const TensorSeries& b, double tol);

// Truncated concatenation product in the tensor algebra:
// (a*b)_w = sum over splits w = uv of a_u * b_v, discarding levels above depth.
TensorSeries tensor_product(const TensorSeries& a, const TensorSeries& b);

// Ordered (time, value in R^d) samples read as a piecewise-linear curve.
// Times are strictly increasing and at least two samples are required.
class PiecewisePath {
public:
    // `values` is row-major, one row of `dimension` entries per sample.
    PiecewisePath(std::vector<double> times, std::vector<double> values, int dimension);

    int dimension() const { return dimension_; }
    std::size_t size() const { return times_.size(); }
    std::size_t segments() const { return times_.size() - 1; }

    double time(std::size_t i) const { return times_[i]; }
    std::span<const double> times() const { return times_; }
    std::span<const double> value(std::size_t i) const;

    // value(segment + 1) - value(segment)
    std::vector<double> displacement(std::size_t segment) const;

    // Affine between knots, right-continuous, defined on [t_1, t_n].
    std::vector<double> evaluate(double t) const;

private:
    int dimension_;
    std::vector<double> times_;
    std::vector<double> values_;
};

// Signature of a straight segment with the given displacement: the tensor
// exponential, level k = displacement^{tensor k} / k!.
TensorSeries segment_signature(std::span<const double> displacement, int depth);

// Signature of a concatenation of two paths. Both operands must share
// dimension and depth and carry 1 at level 0.
TensorSeries chen_concat(const TensorSeries& a, const TensorSeries& b);

// Truncated signature of the piecewise-linear path: left fold of chen_concat
// over the per-segment exponentials. Exact on polylines.
TensorSeries path_signature(const PiecewisePath& path, int depth);

// Truncated tensor logarithm. The level-0 entry of the input must be positive;
// for a signature (level 0 equal to 1) the result has level 0 equal to 0.
// The series terminates at n = depth because (s - 1) is nilpotent.
TensorSeries log_signature(const TensorSeries& s);

// Truncated tensor exponential of an element with zero level-0 entry.
TensorSeries tensor_exp(const TensorSeries& x);

// Multiplies each level-k block by k!. Levels 0 and 1 are unchanged.
TensorSeries factorial_scale(const TensorSeries& s);

struct TermCounts {
    std::uint64_t signature_size;     // sum over k = 1..depth of d^k
    std::uint64_t logsignature_size;  // sum of Witt numbers W(d, k)
};

TermCounts term_counts(int dimension, int depth);

// Levels 1..depth concatenated in word order; level 0 is dropped.
std::vector<double> flatten(const TensorSeries& s);

}  // namespace sigclust::tensor
