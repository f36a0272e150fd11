#ifndef MAHLER_IO_HPP
#define MAHLER_IO_HPP

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "dfao.hpp"
#include "equation.hpp"
#include "fields.hpp"
#include "poly.hpp"
#include "series.hpp"

namespace mahler {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& m) : std::runtime_error("parse error: " + m) {}
};

namespace io_detail {

inline std::string next_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos || line[a] == '#') continue;
        std::size_t b = line.find_last_not_of(" \t\r");
        return line.substr(a, b - a + 1);
    }
    throw ParseError("unexpected end of input");
}

inline std::string expect_key(std::istream& in, const std::string& key) {
    auto line = next_line(in);
    if (line.rfind(key + ":", 0) != 0) throw ParseError("expected '" + key + ":' line");
    auto rest = line.substr(key.size() + 1);
    std::size_t a = rest.find_first_not_of(" \t");
    return a == std::string::npos ? std::string() : rest.substr(a);
}

inline Rat parse_rat(const std::string& tok) {
    try {
        Rat r(tok);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational '" + tok + "'");
    }
}

inline std::uint64_t parse_u64(const std::string& tok) {
    try {
        std::size_t used = 0;
        auto v = std::stoull(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("bad integer '" + tok + "'");
    }
}

inline std::vector<std::string> split_tokens(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

}  // namespace io_detail

/// Field header shared by the series and equation formats: `field: Q` or
/// `field: F <p>`.
struct FieldSpec {
    bool rational = true;
    std::uint64_t p = 0;
};

inline FieldSpec parse_field_line(const std::string& value) {
    auto toks = io_detail::split_tokens(value);
    if (toks.size() == 1 && toks[0] == "Q") return {true, 0};
    if (toks.size() == 2 && toks[0] == "F") return {false, io_detail::parse_u64(toks[1])};
    throw ParseError("field must be 'Q' or 'F <p>'");
}

inline std::string field_line(const FieldSpec& f) {
    return f.rational ? "field: Q" : "field: F " + std::to_string(f.p);
}

// --- SERIES ---------------------------------------------------------------
// SERIES / field / precision: N / then N coefficient lines.

inline FieldSpec read_series_header(std::istream& in, std::size_t& precision) {
    if (io_detail::next_line(in) != "SERIES") throw ParseError("missing SERIES header");
    auto f = parse_field_line(io_detail::expect_key(in, "field"));
    precision = io_detail::parse_u64(io_detail::expect_key(in, "precision"));
    return f;
}

inline TruncatedSeries<QField> read_series_q(std::istream& in) {
    std::size_t n = 0;
    auto f = read_series_header(in, n);
    if (!f.rational) throw ParseError("expected a series over Q");
    TruncatedSeries<QField> s(QField{}, n);
    for (std::size_t i = 0; i < n; ++i) s.at(i) = io_detail::parse_rat(io_detail::next_line(in));
    return s;
}

inline TruncatedSeries<PField> read_series_p(std::istream& in) {
    std::size_t n = 0;
    auto f = read_series_header(in, n);
    if (f.rational) throw ParseError("expected a series over a prime field");
    PField field(f.p);
    TruncatedSeries<PField> s(field, n);
    for (std::size_t i = 0; i < n; ++i)
        s.at(i) = field.of(static_cast<long long>(io_detail::parse_u64(io_detail::next_line(in))));
    return s;
}

inline void write_series(std::ostream& out, const TruncatedSeries<QField>& s) {
    out << "SERIES\nfield: Q\nprecision: " << s.precision() << "\n";
    for (const auto& c : s.coeffs()) out << io_detail::rat_str(c) << "\n";
}

inline void write_series(std::ostream& out, const TruncatedSeries<PField>& s) {
    out << "SERIES\nfield: F " << s.field().p << "\nprecision: " << s.precision() << "\n";
    for (const auto& c : s.coeffs()) out << c.residue() << "\n";
}

// --- polynomials (inline syntax: coefficients from degree 0) ---------------

inline Polynomial<QField> parse_poly_q(const std::string& line) {
    std::vector<Rat> c;
    for (const auto& t : io_detail::split_tokens(line)) c.push_back(io_detail::parse_rat(t));
    return Polynomial<QField>(QField{}, std::move(c));
}

inline std::string poly_str(const Polynomial<QField>& p) {
    if (p.is_zero()) return "0";
    std::string s;
    for (long i = 0; i <= p.degree(); ++i) {
        if (i) s += ' ';
        s += io_detail::rat_str(p.coeff(static_cast<std::size_t>(i)));
    }
    return s;
}

// --- MAHLER ----------------------------------------------------------------
// MAHLER / field / base / order / A: poly|0 / P0..Pn.

inline MahlerEquation<QField> read_equation_q(std::istream& in) {
    if (io_detail::next_line(in) != "MAHLER") throw ParseError("missing MAHLER header");
    auto f = parse_field_line(io_detail::expect_key(in, "field"));
    if (!f.rational) throw ParseError("expected an equation over Q");
    std::size_t base = io_detail::parse_u64(io_detail::expect_key(in, "base"));
    if (base < 2) throw ParseError("base must be at least 2");
    std::size_t order = io_detail::parse_u64(io_detail::expect_key(in, "order"));
    auto a = parse_poly_q(io_detail::expect_key(in, "A"));
    std::vector<Polynomial<QField>> coeffs;
    for (std::size_t i = 0; i <= order; ++i)
        coeffs.push_back(parse_poly_q(io_detail::expect_key(in, "P" + std::to_string(i))));
    return MahlerEquation<QField>{QField{}, base, std::move(a), std::move(coeffs), false};
}

inline void write_equation(std::ostream& out, const MahlerEquation<QField>& eq) {
    out << "MAHLER\nfield: Q\nbase: " << eq.base << "\norder: " << eq.order() << "\n";
    out << "A: " << poly_str(eq.inhomogeneous) << "\n";
    for (std::size_t i = 0; i < eq.coeffs.size(); ++i)
        out << "P" << i << ": " << poly_str(eq.coeffs[i]) << "\n";
}

// --- DFAO -------------------------------------------------------------------
// DFAO / base / states / initial / outputs / m transition lines.

template <class F>
void write_dfao(std::ostream& out, const DFAO<F>& a) {
    out << "DFAO\nbase: " << a.base << "\nstates: " << a.states()
        << "\ninitial: " << a.initial << "\noutputs:";
    for (const auto& o : a.outputs) {
        if constexpr (std::is_same_v<F, PField>)
            out << ' ' << o.residue();
        else
            out << ' ' << io_detail::rat_str(o);
    }
    out << "\n";
    for (const auto& row : a.transitions) {
        for (std::size_t d = 0; d < a.base; ++d) out << (d ? " " : "") << row[d];
        out << "\n";
    }
}

inline DFAO<QField> read_dfao_q(std::istream& in) {
    if (io_detail::next_line(in) != "DFAO") throw ParseError("missing DFAO header");
    std::size_t base = io_detail::parse_u64(io_detail::expect_key(in, "base"));
    std::size_t m = io_detail::parse_u64(io_detail::expect_key(in, "states"));
    std::size_t initial = io_detail::parse_u64(io_detail::expect_key(in, "initial"));
    if (base < 2 || m == 0 || initial >= m) throw ParseError("bad DFAO header");
    auto otoks = io_detail::split_tokens(io_detail::expect_key(in, "outputs"));
    if (otoks.size() != m) throw ParseError("output count does not match states");
    DFAO<QField> a{QField{}, base, initial, {}, {}};
    for (const auto& t : otoks) a.outputs.push_back(io_detail::parse_rat(t));
    for (std::size_t q = 0; q < m; ++q) {
        auto toks = io_detail::split_tokens(io_detail::next_line(in));
        if (toks.size() != base) throw ParseError("transition row has wrong arity");
        std::vector<std::size_t> row;
        for (const auto& t : toks) {
            auto v = io_detail::parse_u64(t);
            if (v >= m) throw ParseError("transition target out of range");
            row.push_back(v);
        }
        a.transitions.push_back(std::move(row));
    }
    return a;
}

// --- file helpers ------------------------------------------------------------

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// FNV-1a digest of a file's bytes, for the reproducibility manifest.
inline std::uint64_t fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace mahler

#endif
