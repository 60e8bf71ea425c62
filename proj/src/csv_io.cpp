#include "lgg/csv_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "lgg/errors.hpp"

namespace lgg::csv {
namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        fields.push_back(trim(field));
    }
    return fields;
}

double parse_double(const std::string& text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw DomainError("malformed number in csv: '" + text + "'");
    }
    return value;
}

Index parse_index(const std::string& text) {
    long long value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw DomainError("malformed index in csv: '" + text + "'");
    }
    return static_cast<Index>(value);
}

bool next_content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        line = trim(line);
        if (!line.empty() && line.front() != '#') {
            return true;
        }
    }
    return false;
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 32> buffer{};
    const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), ptr);
}

void write_matrix(std::ostream& out, const Matrix& m) {
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out << ',';
            }
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

Matrix read_matrix(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (next_content_line(in, line)) {
        std::vector<double> row;
        for (const auto& field : split_fields(line)) {
            row.push_back(parse_double(field));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw DimensionError("ragged matrix csv");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw DimensionError("empty matrix csv");
    }
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            m(i, j) = rows[i][j];
        }
    }
    return m;
}

void write_signal(std::ostream& out, const SparseSignal& signal) {
    out << "length," << signal.length() << '\n' << "index,value\n";
    for (std::size_t i = 0; i < signal.nonzeros(); ++i) {
        out << signal.support()[i] << ',' << format_double(signal.values()[i]) << '\n';
    }
}

void write_dense_signal(std::ostream& out, const Vector& x) {
    out << "length," << x.size() << '\n' << "index,value\n";
    for (Index i = 0; i < x.size(); ++i) {
        out << i << ',' << format_double(x[i]) << '\n';
    }
}

Vector read_signal(std::istream& in) {
    std::string line;
    if (!next_content_line(in, line)) {
        throw DomainError("empty signal csv");
    }
    auto header = split_fields(line);
    if (header.size() != 2 || header[0] != "length") {
        throw DomainError("signal csv must start with 'length,<N>'");
    }
    Vector x = Vector::Zero(parse_index(header[1]));
    while (next_content_line(in, line)) {
        const auto fields = split_fields(line);
        if (fields.size() != 2) {
            throw DomainError("signal csv rows must be index,value pairs");
        }
        if (fields[0] == "index") {
            continue;
        }
        const Index i = parse_index(fields[0]);
        if (i < 0 || i >= x.size()) {
            throw DimensionError("signal index out of range");
        }
        x[i] = parse_double(fields[1]);
    }
    return x;
}

void write_vector(std::ostream& out, const Vector& v) {
    for (Index i = 0; i < v.size(); ++i) {
        out << format_double(v[i]) << '\n';
    }
}

Vector read_vector(std::istream& in) {
    std::vector<double> values;
    std::string line;
    while (next_content_line(in, line)) {
        for (const auto& field : split_fields(line)) {
            values.push_back(parse_double(field));
        }
    }
    return Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
}

Matrix read_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open " + path.string());
    }
    return read_matrix(in);
}

Vector read_vector_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open " + path.string());
    }
    return read_vector(in);
}

}  // namespace lgg::csv
