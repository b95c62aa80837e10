#include "covlab/cli/matrix_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <vector>

#include "covlab/errors.hpp"

namespace covlab::cli {

namespace {

struct Token {
    std::string text;
    std::size_t column;  // 1-based
};

std::vector<Token> split(const std::string& line) {
    std::vector<Token> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos >= line.size()) break;
        const std::size_t start = pos;
        while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        out.push_back({line.substr(start, pos - start), start + 1});
    }
    return out;
}

double to_double(const Token& tok, std::size_t line) {
    double value = 0.0;
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    if (!tok.text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError("expected a decimal number, found '" + tok.text + "'", line, tok.column);
    return value;
}

}  // namespace

SymMatrix parse_matrix(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t dim = 0;
    bool have_dim = false;
    std::vector<std::vector<double>> rows;

    while (std::getline(in, line)) {
        ++line_no;
        const std::vector<Token> tokens = split(line);
        if (tokens.empty()) continue;
        if (!have_dim) {
            if (tokens.size() != 1)
                throw ParseError("first line must hold only the dimension", line_no, tokens[1].column);
            const Token& t = tokens.front();
            std::size_t value = 0;
            const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
            if (ec != std::errc() || ptr != t.text.data() + t.text.size() || value == 0)
                throw ParseError("dimension must be a positive integer, found '" + t.text + "'",
                                 line_no, t.column);
            dim = value;
            have_dim = true;
            continue;
        }
        if (rows.size() == dim)
            throw ParseError("unexpected content after " + std::to_string(dim) + " rows", line_no,
                             tokens.front().column);
        if (tokens.size() != dim) {
            const std::size_t col = tokens.size() > dim ? tokens[dim].column : line.size() + 1;
            throw ParseError("row has " + std::to_string(tokens.size()) + " entries, expected " +
                                 std::to_string(dim),
                             line_no, col);
        }
        std::vector<double> row;
        row.reserve(dim);
        for (const Token& t : tokens) row.push_back(to_double(t, line_no));
        rows.push_back(std::move(row));
    }

    if (!have_dim) throw ParseError("missing dimension line", line_no + 1, 1);
    if (rows.size() != dim)
        throw ParseError("expected " + std::to_string(dim) + " rows, found " +
                             std::to_string(rows.size()),
                         line_no + 1, 1);

    Matrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) m(i, j) = rows[i][j];
    return SymMatrix::from_matrix(m, 1e-12);
}

SymMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open matrix file '" + path + "'", 0, 0);
    return parse_matrix(in);
}

}  // namespace covlab::cli
