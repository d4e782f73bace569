#include "curverecon/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "curverecon/errors.hpp"

namespace curverecon {

int CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return int(i);
    return -1;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& s : out) {
        size_t b = s.find_first_not_of(" \t");
        size_t e = s.find_last_not_of(" \t");
        s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    }
    return out;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    CsvTable t;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_line(line);
        if (t.header.empty()) {
            t.header = fields;
            continue;
        }
        if (fields.size() != t.header.size())
            throw IoError(path + ":" + std::to_string(lineno) + ": expected " +
                          std::to_string(t.header.size()) + " fields, got " +
                          std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            if (f == "nan" || f == "NaN" || f.empty()) {
                row.push_back(std::nan(""));
                continue;
            }
            char* end = nullptr;
            double v = std::strtod(f.c_str(), &end);
            if (end == f.c_str() || *end != '\0')
                throw IoError(path + ":" + std::to_string(lineno) + ": bad number '" + f + "'");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) throw IoError(path + ": no header row");
    return t;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_g17(row[i]);
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

uint64_t fnv1a64(const void* data, size_t n) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    uint64_t h = 14695981039346656037ull;
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

void write_state_csv(const std::string& path, const StateGrid& g) {
    std::vector<std::vector<double>> rows;
    for (const auto& lv : g.levels)
        for (size_t j = 0; j < lv.size(); ++j)
            rows.push_back({g.x_at(lv, j), lv.y, lv.f[j], lv.p[j], lv.q[j], lv.k1[j], lv.k2[j]});
    write_csv(path, {"x", "y", "f", "p", "q", "k1", "k2"}, rows);
}

StateGrid read_state_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    const char* need[] = {"x", "y", "f", "p", "q", "k1", "k2"};
    int c[7];
    for (int i = 0; i < 7; ++i) {
        c[i] = t.column(need[i]);
        if (c[i] < 0) throw IoError(path + ": state CSV lacks column " + need[i]);
    }
    if (t.rows.empty()) throw IoError(path + ": empty state CSV");

    StateGrid g;
    // rows are written level by level with constant y per level
    for (const auto& row : t.rows) {
        double y = row[size_t(c[1])];
        if (g.levels.empty() || g.levels.back().y != y) {
            if (!g.levels.empty() && y < g.levels.back().y)
                throw IoError(path + ": levels out of order");
            g.levels.push_back(LevelData{y, 0, {}, {}, {}, {}, {}});
        }
        LevelData& lv = g.levels.back();
        lv.f.push_back(row[size_t(c[2])]);
        lv.p.push_back(row[size_t(c[3])]);
        lv.q.push_back(row[size_t(c[4])]);
        lv.k1.push_back(row[size_t(c[5])]);
        lv.k2.push_back(row[size_t(c[6])]);
        if (g.levels.size() == 1) g.x.push_back(row[size_t(c[0])]);
    }
    if (g.x.size() < 2) throw IoError(path + ": level 0 too small");
    g.dx = g.x[1] - g.x[0];
    if (g.levels.size() > 1) g.dy = g.levels[1].y - g.levels[0].y;
    // recover offsets by matching the first abscissa of each level
    size_t rowidx = 0;
    for (auto& lv : g.levels) {
        double x0 = t.rows[rowidx][size_t(c[0])];
        double rel = (x0 - g.x[0]) / g.dx;
        long i0 = std::lround(rel);
        if (std::abs(rel - double(i0)) > 1e-6 || i0 < 0 ||
            size_t(i0) + lv.size() > g.x.size())
            throw IoError(path + ": level abscissae do not sit on the base grid");
        lv.i0 = size_t(i0);
        rowidx += lv.size();
    }
    return g;
}

void write_obj_from_grid(const std::string& path, const StateGrid& g) {
    std::vector<double> ys;
    for (const auto& lv : g.levels) ys.push_back(lv.y);
    std::vector<double> z(g.x.size() * ys.size(), std::nan(""));
    for (size_t l = 0; l < g.levels.size(); ++l) {
        const auto& lv = g.levels[l];
        for (size_t j = 0; j < lv.size(); ++j) z[l * g.x.size() + lv.i0 + j] = lv.f[j];
    }
    write_obj_grid(path, g.x, ys, z);
}

void write_obj_grid(const std::string& path, const std::vector<double>& xs,
                    const std::vector<double>& ys, const std::vector<double>& z_rowmajor) {
    size_t nx = xs.size(), ny = ys.size();
    if (z_rowmajor.size() != nx * ny) throw IoError("obj grid: z size must be nx*ny");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);

    // vertex numbering: OBJ indices are 1-based and skip NaN holes
    std::vector<long> vid(nx * ny, 0);
    long next = 1;
    for (size_t j = 0; j < ny; ++j)
        for (size_t i = 0; i < nx; ++i) {
            double z = z_rowmajor[j * nx + i];
            if (std::isnan(z)) continue;
            vid[j * nx + i] = next++;
            out << "v " << format_g17(xs[i]) << " " << format_g17(ys[j]) << " " << format_g17(z)
                << "\n";
        }
    auto emit = [&](long a, long b, long c) { out << "f " << a << " " << b << " " << c << "\n"; };
    for (size_t j = 0; j + 1 < ny; ++j)
        for (size_t i = 0; i + 1 < nx; ++i) {
            long v00 = vid[j * nx + i], v10 = vid[j * nx + i + 1];
            long v01 = vid[(j + 1) * nx + i], v11 = vid[(j + 1) * nx + i + 1];
            if (!v00 || !v10 || !v01 || !v11) continue;
            double z00 = z_rowmajor[j * nx + i], z10 = z_rowmajor[j * nx + i + 1];
            double z01 = z_rowmajor[(j + 1) * nx + i], z11 = z_rowmajor[(j + 1) * nx + i + 1];
            double d0 = std::abs(z11 - z00), d1 = std::abs(z10 - z01);
            if (d0 <= d1) {  // split along v00-v11
                emit(v00, v10, v11);
                emit(v00, v11, v01);
            } else {  // split along v10-v01
                emit(v00, v10, v01);
                emit(v10, v11, v01);
            }
        }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace curverecon
