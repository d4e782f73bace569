#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curverecon/march.hpp"

namespace curverecon {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const;  // -1 when absent
    bool has(const std::string& name) const { return column(name) >= 0; }
};

CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Shortest round-trip decimal form used for all numeric output, so files
// are byte-stable across runs.
std::string format_g17(double v);

uint64_t fnv1a64(const void* data, size_t n);
uint64_t fnv1a64(const std::string& s);

// Triangulated OBJ for a rectangular graph grid, z row-major over ys then
// xs.  NaN entries leave holes; each quad splits along its shorter diagonal.
void write_obj_grid(const std::string& path, const std::vector<double>& xs,
                    const std::vector<double>& ys, const std::vector<double>& z_rowmajor);

// State rows x,y,f,p,q,k1,k2, one per node, levels in marching order.
void write_state_csv(const std::string& path, const StateGrid& g);
StateGrid read_state_csv(const std::string& path);

void write_obj_from_grid(const std::string& path, const StateGrid& g);

}  // namespace curverecon
