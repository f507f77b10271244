#pragma once

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"
#include "matroid.hpp"

namespace flatforge {

// Location is 1-based; column 0 means the whole line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

namespace detail {

inline int digit_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'z') return c - 'a' + 10;
    return -1;
}

inline char digit_char(int v) { return static_cast<char>(v < 10 ? '0' + v : 'a' + v - 10); }

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty() && cur.back() == '\r') cur.pop_back();
    if (!cur.empty()) lines.push_back(cur);
    while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string::npos) lines.pop_back();
    return lines;
}

inline bool default_labels(const Matroid& m) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m.label(i) != std::to_string(i)) return false;
    }
    return true;
}

}  // namespace detail

inline Matroid parse_matroid(const std::string& text) {
    const auto lines = detail::split_lines(text);
    if (lines.empty()) throw ParseError(1, 0, "missing header \"p r n\"");
    long long p = 0, r = 0, n = 0;
    {
        std::istringstream hs(lines[0]);
        std::string extra;
        if (!(hs >> p >> r >> n) || (hs >> extra)) throw ParseError(1, 0, "header must be three integers \"p r n\"");
    }
    if (!is_supported_prime(static_cast<int>(p))) throw ParseError(1, 1, "unsupported prime " + std::to_string(p));
    if (r < 0 || r > kMaxDim) throw ParseError(1, 0, "rank row count " + std::to_string(r) + " out of range");
    if (n < 0) throw ParseError(1, 0, "negative element count");
    if (static_cast<long long>(lines.size()) < 1 + r) {
        throw ParseError(lines.size() + 1, 0, "expected " + std::to_string(r) + " matrix rows");
    }
    const auto cols = static_cast<std::size_t>(n);
    std::vector<VecGF> vecs(cols, VecGF(static_cast<int>(p), std::vector<Residue>(static_cast<std::size_t>(r), 0)));
    for (long long i = 0; i < r; ++i) {
        const auto& row = lines[static_cast<std::size_t>(1 + i)];
        const auto lineno = static_cast<std::size_t>(i + 2);
        for (std::size_t j = 0; j < row.size(); ++j) {
            const int d = detail::digit_value(row[j]);
            if (d < 0) throw ParseError(lineno, j + 1, std::string("non-digit character '") + row[j] + "'");
            if (d >= p) throw ParseError(lineno, j + 1, "digit " + std::string(1, row[j]) + " is not below p");
            if (j < cols) vecs[j][static_cast<std::size_t>(i)] = static_cast<Residue>(d);
        }
        if (row.size() != cols) {
            throw ParseError(lineno, std::min(row.size(), cols) + 1,
                             "row has " + std::to_string(row.size()) + " digits, expected " + std::to_string(cols));
        }
    }
    std::vector<std::string> labels;
    const auto label_line = static_cast<std::size_t>(1 + r);
    if (lines.size() > label_line) {
        if (lines.size() > label_line + 1) throw ParseError(label_line + 2, 0, "unexpected text after the label line");
        std::istringstream ls(lines[label_line]);
        std::string tok;
        while (ls >> tok) labels.push_back(tok);
        if (labels.size() != cols) {
            throw ParseError(label_line + 1, 0,
                             std::to_string(labels.size()) + " labels for " + std::to_string(cols) + " elements");
        }
    }
    try {
        return Matroid(static_cast<int>(p), static_cast<int>(r), std::move(vecs), std::move(labels));
    } catch (const std::invalid_argument& e) {
        throw ParseError(label_line + 1, 0, e.what());
    }
}

// Header and matrix rows only, LF line endings; this is what the digest covers.
inline std::string canonical_matrix_text(const Matroid& m) {
    std::string out = std::to_string(m.p()) + " " + std::to_string(m.dim()) + " " + std::to_string(m.size()) + "\n";
    for (int i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) out += detail::digit_char(m.vector(j)[static_cast<std::size_t>(i)]);
        out += '\n';
    }
    return out;
}

inline std::string emit_matroid(const Matroid& m) {
    std::string out = canonical_matrix_text(m);
    if (!detail::default_labels(m)) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            const auto& l = m.label(j);
            if (l.empty() || l.find_first_of(" \t\r\n") != std::string::npos) {
                throw std::invalid_argument("label '" + l + "' cannot be written on the label line");
            }
            out += (j ? " " : "") + l;
        }
        out += '\n';
    }
    return out;
}

inline std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

inline std::string matroid_digest(const Matroid& m) { return sha256_hex(canonical_matrix_text(m)); }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace flatforge
