#include "lgg/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lgg/errors.hpp"

namespace lgg {

std::string to_string(MatrixKind kind) {
    switch (kind) {
        case MatrixKind::gaussian: return "gaussian";
        case MatrixKind::extended: return "extended";
        case MatrixKind::compound: return "compound";
    }
    return "unknown";
}

SensingMatrix::SensingMatrix(Matrix entries, MatrixKind kind, std::optional<Vector> column_scale,
                             std::optional<CompoundLayout> compound)
    : entries_(std::move(entries)),
      kind_(kind),
      column_scale_(std::move(column_scale)),
      compound_(compound) {
    const Index n = entries_.rows();
    const Index N = entries_.cols();
    if (n < 1 || N < n) {
        throw DimensionError("sensing matrix must satisfy 1 <= n <= N, got " + std::to_string(n) +
                             "x" + std::to_string(N));
    }
    if (column_scale_ && column_scale_->size() != N) {
        throw DimensionError("column_scale length must equal the column count");
    }
    if (kind_ == MatrixKind::extended) {
        if (!entries_.rightCols(n).isIdentity(0.0)) {
            throw DomainError("extended matrix must end in an exact identity block");
        }
    }
    if (kind_ == MatrixKind::compound) {
        if (!compound_) {
            throw DomainError("compound matrix requires a split point and scale");
        }
        if (compound_->split <= 0 || compound_->split >= N || !(compound_->delta > 0.0) ||
            !std::isfinite(compound_->delta)) {
            throw DomainError("compound layout needs 0 < split < N and delta > 0");
        }
    } else if (compound_) {
        throw DomainError("only compound matrices carry a compound layout");
    }
}

std::string Block::label() const {
    switch (role) {
        case BlockRole::data: return "data";
        case BlockRole::error: return "error";
        case BlockRole::source: return "source-" + std::to_string(source);
    }
    return "unknown";
}

BlockPartition::BlockPartition(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) {
        throw DomainError("block partition needs at least one block");
    }
    Index next = 0;
    for (const auto& block : blocks_) {
        if (block.start != next || block.length < 1) {
            throw DomainError("blocks must be contiguous, non-empty and start at 0");
        }
        next = block.end();
    }
}

BlockPartition BlockPartition::single(Index length) {
    return BlockPartition({Block{0, length, BlockRole::data, 0}});
}

BlockPartition BlockPartition::sources(std::span<const Index> lengths) {
    std::vector<Block> blocks;
    Index start = 0;
    int source = 1;
    for (const auto length : lengths) {
        blocks.push_back(Block{start, length, BlockRole::source, source++});
        start += length;
    }
    return BlockPartition(std::move(blocks));
}

std::size_t BlockPartition::block_of(Index i) const {
    if (i < 0 || i >= total()) {
        throw DimensionError("column index outside partition");
    }
    const auto it = std::upper_bound(blocks_.begin(), blocks_.end(), i,
                                     [](Index value, const Block& b) { return value < b.start; });
    return static_cast<std::size_t>(std::distance(blocks_.begin(), it) - 1);
}

SparseSignal::SparseSignal(Index length, std::vector<Index> support, std::vector<double> values,
                           std::string distribution)
    : length_(length),
      support_(std::move(support)),
      values_(std::move(values)),
      distribution_(std::move(distribution)) {
    if (length_ < 0) {
        throw DomainError("signal length must be non-negative");
    }
    if (support_.size() != values_.size()) {
        throw DimensionError("support and values differ in length");
    }
    std::vector<std::size_t> order(support_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [this](std::size_t a, std::size_t b) { return support_[a] < support_[b]; });
    std::vector<Index> sorted_support;
    std::vector<double> sorted_values;
    sorted_support.reserve(order.size());
    sorted_values.reserve(order.size());
    for (const auto o : order) {
        sorted_support.push_back(support_[o]);
        sorted_values.push_back(values_[o]);
    }
    for (std::size_t i = 0; i < sorted_support.size(); ++i) {
        if (sorted_support[i] < 0 || sorted_support[i] >= length_) {
            throw DomainError("support index out of range");
        }
        if (i > 0 && sorted_support[i] == sorted_support[i - 1]) {
            throw DomainError("duplicate support index");
        }
        if (sorted_values[i] == 0.0 || !std::isfinite(sorted_values[i])) {
            throw DomainError("support values must be finite and nonzero");
        }
    }
    support_ = std::move(sorted_support);
    values_ = std::move(sorted_values);
}

SparseSignal SparseSignal::zero(Index length) {
    return SparseSignal(length, {}, {}, "zero");
}

SparseSignal SparseSignal::from_dense(const Vector& dense, std::string distribution) {
    std::vector<Index> support;
    std::vector<double> values;
    for (Index i = 0; i < dense.size(); ++i) {
        if (dense[i] != 0.0) {
            support.push_back(i);
            values.push_back(dense[i]);
        }
    }
    return SparseSignal(dense.size(), std::move(support), std::move(values), std::move(distribution));
}

Vector SparseSignal::dense() const {
    Vector x = Vector::Zero(length_);
    for (std::size_t i = 0; i < support_.size(); ++i) {
        x[support_[i]] = values_[i];
    }
    return x;
}

SensingMatrix make_gaussian_matrix(Index n, Index N, bool normalize, const RngSpec& spec) {
    if (n < 1 || N < n) {
        throw DimensionError("gaussian matrix needs 1 <= n <= N");
    }
    Rng rng(spec);
    Matrix phi(n, N);
    // Row-major fill order so the stream maps to entries the way a reader expects.
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < N; ++j) {
            phi(i, j) = rng.normal();
        }
    }
    if (!normalize) {
        return SensingMatrix(std::move(phi), MatrixKind::gaussian);
    }
    Vector scale = phi.colwise().norm().transpose();
    for (Index j = 0; j < N; ++j) {
        phi.col(j) /= scale[j];
    }
    return SensingMatrix(std::move(phi), MatrixKind::gaussian, std::move(scale));
}

PartitionedMatrix extend_with_identity(const SensingMatrix& phi) {
    if (phi.kind() != MatrixKind::gaussian) {
        throw DomainError("extend_with_identity expects a gaussian matrix");
    }
    const Index n = phi.rows();
    const Index N = phi.cols();
    Matrix extended(n, N + n);
    extended.leftCols(N) = phi.entries();
    extended.rightCols(n).setIdentity();
    std::optional<Vector> scale;
    if (phi.column_scale()) {
        scale = Vector::Ones(N + n);
        scale->head(N) = *phi.column_scale();
    }
    BlockPartition partition({Block{0, N, BlockRole::data, 0}, Block{N, n, BlockRole::error, 0}});
    return {SensingMatrix(std::move(extended), MatrixKind::extended, std::move(scale)),
            std::move(partition)};
}

PartitionedMatrix make_compound(const SensingMatrix& phi1, const SensingMatrix& phi2, double delta) {
    if (phi1.rows() != phi2.rows()) {
        throw DimensionError("compound blocks must have equal row counts");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw DomainError("compound scale delta must be positive");
    }
    const Index n = phi1.rows();
    const Index N1 = phi1.cols();
    const Index N2 = phi2.cols();
    Matrix psi(n, N1 + N2);
    psi.leftCols(N1) = phi1.entries();
    psi.rightCols(N2) = delta * phi2.entries();
    BlockPartition partition(
        {Block{0, N1, BlockRole::source, 1}, Block{N1, N2, BlockRole::source, 2}});
    return {SensingMatrix(std::move(psi), MatrixKind::compound, std::nullopt,
                          CompoundLayout{N1, delta}),
            std::move(partition)};
}

SparseSignal sample_sparse_signal(Index length, Index k, double magnitude_scale, const RngSpec& spec) {
    if (length < 0 || k < 0 || k > length) {
        throw DomainError("sparsity k must lie in [0, length]");
    }
    if (!(magnitude_scale > 0.0) || !std::isfinite(magnitude_scale)) {
        throw DomainError("magnitude scale must be positive");
    }
    Rng rng(spec);
    // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
    std::vector<Index> pool(static_cast<std::size_t>(length));
    std::iota(pool.begin(), pool.end(), Index{0});
    std::vector<Index> support(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) {
        const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(length - i)));
        std::swap(pool[i], pool[j]);
        support[i] = pool[i];
    }
    std::vector<double> values(static_cast<std::size_t>(k));
    for (auto& v : values) {
        do {
            v = magnitude_scale * rng.normal();
        } while (v == 0.0);
    }
    return SparseSignal(length, std::move(support), std::move(values), "gaussian");
}

SparseSignal embed_signals(std::span<const SparseSignal> signals, const BlockPartition& partition) {
    if (signals.size() != partition.size()) {
        throw DomainError("need exactly one signal per block");
    }
    std::vector<Index> support;
    std::vector<double> values;
    std::string distribution;
    for (std::size_t b = 0; b < signals.size(); ++b) {
        const auto& block = partition[b];
        const auto& signal = signals[b];
        if (signal.length() != block.length) {
            throw DomainError("signal length differs from block " + block.label());
        }
        for (std::size_t i = 0; i < signal.nonzeros(); ++i) {
            support.push_back(block.start + signal.support()[i]);
            values.push_back(signal.values()[i]);
        }
        if (b == 0) {
            distribution = signal.distribution();
        } else if (distribution != signal.distribution()) {
            distribution = "mixed";
        }
    }
    return SparseSignal(partition.total(), std::move(support), std::move(values), distribution);
}

}  // namespace lgg
