#include "nehari/field_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace nehari {

void write_field(const std::string& path, const Field& u) {
    const GridSpec& g = *u.grid;
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error(ErrorCode::io_error, "cannot open '" + path + "' for writing");
    for (int a = 0; a < g.dim; ++a) std::fprintf(f, "%d,", g.n[a]);
    std::fprintf(f, "%.17g,%.17g\n", g.h, g.T);
    std::array<int, kMaxDim> idx{};
    for (std::size_t k = 0; k < u.size(); ++k) {
        g.node_multi_index(g.node_of_mask[k], idx);
        for (int a = 0; a < g.dim; ++a) std::fprintf(f, "%d,", idx[a]);
        std::fprintf(f, "%.17g\n", u[k]);
    }
    if (std::fclose(f) != 0)
        throw Error(ErrorCode::io_error, "error closing '" + path + "'");
}

Field read_field(std::shared_ptr<const GridSpec> grid, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
    std::string header;
    if (!std::getline(in, header) || header.empty())
        throw Error(ErrorCode::io_error, "malformed header: '" + path + "' is empty");

    const GridSpec& g = *grid;
    std::vector<std::string> cells;
    {
        std::istringstream hs(header);
        std::string tok;
        while (std::getline(hs, tok, ',')) cells.push_back(tok);
    }
    if (static_cast<int>(cells.size()) != g.dim + 2)
        throw Error(ErrorCode::dimension_mismatch,
                    "header has " + std::to_string(cells.size()) + " fields, expected " +
                        std::to_string(g.dim + 2) + " for a " + std::to_string(g.dim) +
                        "D grid");
    for (int a = 0; a < g.dim; ++a) {
        long nv = std::strtol(cells[a].c_str(), nullptr, 10);
        if (nv != g.n[a])
            throw Error(ErrorCode::dimension_mismatch,
                        "header axis " + std::to_string(a) + " has " + std::to_string(nv) +
                            " nodes, grid has " + std::to_string(g.n[a]));
    }
    double hh = std::strtod(cells[g.dim].c_str(), nullptr);
    double TT = std::strtod(cells[g.dim + 1].c_str(), nullptr);
    if (hh != g.h || TT != g.T)
        throw Error(ErrorCode::dimension_mismatch, "header h/T do not match the grid");

    Field u(grid);
    std::vector<bool> seen(u.size(), false);
    std::string line;
    std::size_t rows = 0;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::array<int, kMaxDim> idx{};
        const char* ptr = line.c_str();
        char* end = nullptr;
        for (int a = 0; a < g.dim; ++a) {
            idx[a] = static_cast<int>(std::strtol(ptr, &end, 10));
            if (end == ptr || *end != ',')
                throw Error(ErrorCode::io_error,
                            "malformed row at line " + std::to_string(lineno));
            ptr = end + 1;
        }
        double val = std::strtod(ptr, &end);
        if (end == ptr)
            throw Error(ErrorCode::io_error, "malformed value at line " + std::to_string(lineno));
        std::int32_t mk = g.mask_at(idx);
        if (mk < 0)
            throw Error(ErrorCode::dimension_mismatch,
                        "row at line " + std::to_string(lineno) +
                            " addresses a node outside the mask");
        if (seen[static_cast<std::size_t>(mk)])
            throw Error(ErrorCode::io_error,
                        "duplicate node at line " + std::to_string(lineno));
        seen[static_cast<std::size_t>(mk)] = true;
        u[static_cast<std::size_t>(mk)] = val;
        ++rows;
    }
    if (rows != u.size())
        throw Error(ErrorCode::dimension_mismatch,
                    "dump has " + std::to_string(rows) + " rows, mask has " +
                        std::to_string(u.size()) + " nodes");
    return u;
}

} // namespace nehari
