#pragma once

// Problem instances: sensing matrices, block partitions, sparse signals.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lgg/rng.hpp"

namespace lgg {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class MatrixKind { gaussian, extended, compound };

std::string to_string(MatrixKind kind);

/// Split point and scale of a compound matrix (Phi1, delta * Phi2).
struct CompoundLayout {
    Index split = 0;
    double delta = 1.0;
};

/// Dense n x N measurement matrix with N >= n.
///
/// Immutable after construction. The constructor enforces the structural
/// invariants of each kind: an extended matrix must end in an exact n x n
/// identity, a compound matrix must carry a valid layout.
class SensingMatrix {
public:
    SensingMatrix(Matrix entries, MatrixKind kind,
                  std::optional<Vector> column_scale = std::nullopt,
                  std::optional<CompoundLayout> compound = std::nullopt);

    Index rows() const { return entries_.rows(); }
    Index cols() const { return entries_.cols(); }
    const Matrix& entries() const { return entries_; }
    MatrixKind kind() const { return kind_; }
    const std::optional<Vector>& column_scale() const { return column_scale_; }
    const std::optional<CompoundLayout>& compound() const { return compound_; }

    Vector apply(const Vector& x) const { return entries_ * x; }

private:
    Matrix entries_;
    MatrixKind kind_;
    std::optional<Vector> column_scale_;
    std::optional<CompoundLayout> compound_;
};

enum class BlockRole { data, error, source };

struct Block {
    Index start = 0;
    Index length = 0;
    BlockRole role = BlockRole::data;
    /// 1-based source number for BlockRole::source, 0 otherwise.
    int source = 0;

    Index end() const { return start + length; }
    std::string label() const;
};

/// Ordered, contiguous, disjoint blocks covering [0, total).
///
/// Block b owns generous-weight slot b.
class BlockPartition {
public:
    explicit BlockPartition(std::vector<Block> blocks);

    /// A single data block of the given length.
    static BlockPartition single(Index length);
    /// Consecutive source blocks source-1, source-2, ... with the given lengths.
    static BlockPartition sources(std::span<const Index> lengths);

    const std::vector<Block>& blocks() const { return blocks_; }
    std::size_t size() const { return blocks_.size(); }
    Index total() const { return blocks_.back().end(); }
    const Block& operator[](std::size_t b) const { return blocks_[b]; }
    /// Index of the block containing column i.
    std::size_t block_of(Index i) const;

private:
    std::vector<Block> blocks_;
};

/// Length-N vector with an explicit support; all off-support entries are zero.
class SparseSignal {
public:
    SparseSignal(Index length, std::vector<Index> support, std::vector<double> values,
                 std::string distribution = "gaussian");

    static SparseSignal zero(Index length);
    /// Support = nonzero entries of a dense vector.
    static SparseSignal from_dense(const Vector& dense, std::string distribution = "dense");

    Index length() const { return length_; }
    const std::vector<Index>& support() const { return support_; }
    const std::vector<double>& values() const { return values_; }
    const std::string& distribution() const { return distribution_; }
    std::size_t nonzeros() const { return support_.size(); }

    Vector dense() const;

private:
    Index length_;
    std::vector<Index> support_;
    std::vector<double> values_;
    std::string distribution_;
};

struct PartitionedMatrix {
    SensingMatrix matrix;
    BlockPartition partition;
};

/// n x N matrix of i.i.d. standard normals; optionally scaled to unit columns.
SensingMatrix make_gaussian_matrix(Index n, Index N, bool normalize, const RngSpec& rng);

/// (Phi I_n) with partition [data: 0..N), [error: N..N+n).
PartitionedMatrix extend_with_identity(const SensingMatrix& phi);

/// (Phi1, delta * Phi2) with partition [source-1, source-2].
PartitionedMatrix make_compound(const SensingMatrix& phi1, const SensingMatrix& phi2, double delta);

/// k-sparse vector: uniform support without replacement, N(0, scale^2) values.
SparseSignal sample_sparse_signal(Index length, Index k, double magnitude_scale, const RngSpec& rng);

/// Concatenates one signal per block in block order.
SparseSignal embed_signals(std::span<const SparseSignal> signals, const BlockPartition& partition);

}  // namespace lgg
