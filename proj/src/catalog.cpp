#include "stpp/catalog.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace stpp {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r' && c != ' ' && c != '\t') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::string> expected_header(int d) {
    std::vector<std::string> h;
    if (d == 2) {
        h = {"x", "y"};
    } else {
        for (int a = 1; a <= d; ++a) h.push_back("x" + std::to_string(a));
    }
    h.push_back("t");
    h.push_back("mark");
    return h;
}

double parse_field(const std::string& s, std::size_t line) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != end) {
        throw ParseError("malformed number '" + s + "'", line);
    }
    return v;
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CatalogLoad read_catalog(std::istream& in, const Window& window, const MarkSpace& marks) {
    const int d = window.dim();
    const auto header = expected_header(d);
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty catalog", 1);
    ++line_no;
    if (split_csv_line(line) != header) {
        std::string want;
        for (std::size_t i = 0; i < header.size(); ++i) want += (i ? "," : "") + header[i];
        throw ParseError("catalog header must be '" + want + "'", line_no);
    }

    std::vector<MarkedPoint> points;
    CatalogLoad result{MarkedPattern(window, marks, {}), 0, 0, 0, {}};
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        MarkedPoint p;
        p.loc.x.resize(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a) p.loc.x[static_cast<std::size_t>(a)] = parse_field(fields[a], line_no);
        p.loc.t = parse_field(fields[static_cast<std::size_t>(d)], line_no);
        p.mark = parse_field(fields[static_cast<std::size_t>(d) + 1], line_no);
        ++result.rows_read;
        if (!marks.contains(p.mark)) {
            throw ParseError("mark " + fields.back() + " outside mark space " + marks.describe(),
                             line_no);
        }
        if (!window.contains(p.loc)) {
            ++result.dropped_outside;
            continue;
        }
        points.push_back(std::move(p));
    }
    if (result.dropped_outside > 0) {
        result.warnings.push_back(std::to_string(result.dropped_outside) +
                                  " dropped (outside window)");
    }
    result.duplicates = collapse_duplicates(points);
    if (result.duplicates > 0) {
        result.warnings.push_back(std::to_string(result.duplicates) +
                                  " duplicate rows collapsed");
    }
    if (points.empty()) throw InputError("catalog contains no points inside the window");
    result.pattern = MarkedPattern(window, marks, std::move(points));
    return result;
}

CatalogLoad load_catalog(const std::string& path, const Window& window, const MarkSpace& marks) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open catalog '" + path + "'");
    return read_catalog(in, window, marks);
}

void write_catalog(std::ostream& out, const MarkedPattern& p) {
    const auto header = expected_header(p.dim());
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (int a = 0; a < p.dim(); ++a) out << format_number(p.axis(a)[i]) << ",";
        out << format_number(p.times()[i]) << "," << format_number(p.marks()[i]) << "\n";
    }
}

}  // namespace stpp
