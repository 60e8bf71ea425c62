#pragma once

// CSV interchange for matrices, signals and plain vectors.
//
// Matrix:  one line per row, comma separated.
// Signal:  "length,<N>" header, "index,value" column header, then one
//          "<i>,<x_i>" line per stored entry (0-based indices).
// Vector:  one value per line (a single comma-separated line is also accepted).
//
// Values are written in shortest round-trip form, so write/read is exact.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lgg/core_model.hpp"

namespace lgg::csv {

std::string format_double(double value);

void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in);

void write_signal(std::ostream& out, const SparseSignal& signal);
/// Writes every entry of a dense vector as an index,value pair.
void write_dense_signal(std::ostream& out, const Vector& x);
Vector read_signal(std::istream& in);

void write_vector(std::ostream& out, const Vector& v);
Vector read_vector(std::istream& in);

Matrix read_matrix_file(const std::filesystem::path& path);
Vector read_vector_file(const std::filesystem::path& path);

}  // namespace lgg::csv
