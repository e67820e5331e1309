#ifndef TWONN_IO_HPP
#define TWONN_IO_HPP

#include "twonn/dataset.hpp"
#include "twonn/error.hpp"
#include "twonn/estimator.hpp"
#include "twonn/scan.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

/**
 * @file io.hpp
 *
 * @brief Delimited numeric tables, fit exports, scan curves and JSON results.
 *
 * Tables use `.` as decimal separator, accept LF or CRLF line endings, skip
 * blank lines, and may start with one non-numeric header row. Numbers are
 * written with 17 significant digits so that a write/read cycle is lossless.
 */

namespace twonn::io {

enum class TableFormat { csv, tsv };

inline char delimiter(TableFormat f) {
    return f == TableFormat::csv ? ',' : '\t';
}

inline std::optional<TableFormat> parse_table_format(std::string_view name) {
    if (name == "csv" || name == "csv-square") {
        return TableFormat::csv;
    }
    if (name == "tsv" || name == "tsv-square") {
        return TableFormat::tsv;
    }
    return std::nullopt;
}

/// "%.17g"; infinities are written as "inf" / "-inf".
inline std::string format_number(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

inline std::optional<double> parse_number(std::string_view field) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    if (field.empty()) {
        return std::nullopt;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        return std::nullopt;
    }
    return v;
}

inline std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

} // namespace detail

/**
 * @brief Read a rectangular numeric table.
 *
 * The first non-blank line is treated as a header when any of its fields is
 * not a number. Throws `ParseError` with 1-based line and column for a
 * non-numeric field or a row whose field count differs from the first row.
 */
inline std::vector<std::vector<double>> read_table(std::istream& in, char delim) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool seen_first = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (!view.empty() && view.back() == '\r') {
            view.remove_suffix(1);
        }
        if (detail::trim(view).empty()) {
            continue;
        }
        const auto fields = detail::split(view, delim);
        std::vector<double> row;
        row.reserve(fields.size());
        std::optional<std::size_t> bad_column;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (auto v = detail::parse_number(fields[c])) {
                row.push_back(*v);
            } else if (!bad_column) {
                bad_column = c + 1;
            }
        }
        if (!seen_first) {
            seen_first = true;
            width = fields.size();
            if (bad_column) {
                continue; // header
            }
        }
        if (fields.size() != width) {
            throw ParseError(line_no, std::min(fields.size(), width) + 1,
                             "expected " + std::to_string(width) + " fields, found " + std::to_string(fields.size()));
        }
        if (bad_column) {
            throw ParseError(line_no, *bad_column, "not a number: '" + std::string(fields[*bad_column - 1]) + "'");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "' for reading");
    }
    return in;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    return out;
}

inline PointSet load_points(std::istream& in, TableFormat format) {
    return validate_pointset(read_table(in, delimiter(format)));
}

inline PointSet load_points(const std::string& path, TableFormat format) {
    auto in = open_input(path);
    return load_points(in, format);
}

/// Square table; symmetry is enforced within 1e-9 relative and near-symmetric pairs are averaged.
inline DistanceMatrix load_distance_matrix(std::istream& in, TableFormat format) {
    return DistanceMatrix::from_rows(read_table(in, delimiter(format)));
}

inline DistanceMatrix load_distance_matrix(const std::string& path, TableFormat format) {
    auto in = open_input(path);
    return load_distance_matrix(in, format);
}

inline void write_points(std::ostream& out, const PointSet& ps, TableFormat format = TableFormat::csv) {
    const char delim = delimiter(format);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t k = 0; k < ps.dim(); ++k) {
            if (k) {
                out << delim;
            }
            out << format_number(ps(i, k));
        }
        out << '\n';
    }
}

/// Cumulate points with their fit membership and the fitted slope.
struct FitExport {
    std::vector<CdfPoint> points;
    std::vector<bool> kept;
    double d_hat = 0.0;
};

/**
 * @brief Plot-ready dump of a cumulate fit.
 *
 * Layout:
 * ```
 * # d_hat=<slope>
 * # x	y	kept
 * <x>	<y>	<0|1>
 * ```
 * The point with F = 1 is written with y = inf.
 */
inline void export_fit(std::ostream& out, std::span<const CdfPoint> points, const std::vector<bool>& kept,
                       double d_hat) {
    if (kept.size() != points.size()) {
        throw InvalidArgument("kept mask length does not match the number of cumulate points");
    }
    out << "# d_hat=" << format_number(d_hat) << '\n';
    out << "# x\ty\tkept\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        out << format_number(points[i].x) << '\t' << format_number(points[i].y) << '\t' << (kept[i] ? 1 : 0)
            << '\n';
    }
}

inline void export_fit(const std::string& path, std::span<const CdfPoint> points, const std::vector<bool>& kept,
                       double d_hat) {
    auto out = open_output(path);
    export_fit(out, points, kept, d_hat);
    if (!out) {
        throw Error("failed writing '" + path + "'");
    }
}

inline FitExport read_fit_export(std::istream& in) {
    FitExport fx;
    std::string line;
    std::size_t line_no = 0;
    bool have_slope = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line.rfind("# d_hat=", 0) == 0) {
            auto v = detail::parse_number(std::string_view(line).substr(8));
            if (!v) {
                throw ParseError(line_no, 9, "bad d_hat value");
            }
            fx.d_hat = *v;
            have_slope = true;
            continue;
        }
        if (line.front() == '#') {
            continue;
        }
        const auto fields = detail::split(line, '\t');
        if (fields.size() != 3) {
            throw ParseError(line_no, std::min<std::size_t>(fields.size(), 3) + 1, "expected 3 fields");
        }
        CdfPoint p;
        auto x = detail::parse_number(fields[0]);
        auto y = detail::parse_number(fields[1]);
        if (!x) {
            throw ParseError(line_no, 1, "bad x");
        }
        if (!y) {
            throw ParseError(line_no, 2, "bad y");
        }
        p.x = *x;
        p.y = *y;
        const auto flag = detail::trim(fields[2]);
        if (flag != "0" && flag != "1") {
            throw ParseError(line_no, 3, "kept flag must be 0 or 1");
        }
        fx.points.push_back(p);
        fx.kept.push_back(flag == "1");
    }
    if (!have_slope) {
        throw ParseError(line_no, 1, "missing '# d_hat=' line");
    }
    return fx;
}

/// Scan curve as TSV with a single `#` header line.
inline void write_scan(std::ostream& out, const ScanCurve& curve) {
    out << "# block_size\td_mean\td_std\tn_blocks\n";
    for (const auto& p : curve.points) {
        out << p.block_size << '\t' << format_number(p.d_mean) << '\t' << format_number(p.d_std) << '\t'
            << p.n_blocks << '\n';
    }
}

inline nlohmann::ordered_json to_json(const Estimate& est) {
    nlohmann::ordered_json j;
    j["d_hat"] = est.d_hat;
    j["method"] = std::string(to_string(est.method));
    j["n_total"] = est.n_total;
    j["n_used"] = est.n_used;
    j["discard_fraction"] = est.discard_fraction;
    j["rms_residual"] = est.rms_residual;
    return j;
}

inline nlohmann::ordered_json to_json(const PlateauReport& p) {
    nlohmann::ordered_json j;
    j["found"] = p.found;
    j["lo"] = p.lo;
    j["hi"] = p.hi;
    j["d_plateau"] = p.d_plateau;
    return j;
}

} // namespace twonn::io

#endif
