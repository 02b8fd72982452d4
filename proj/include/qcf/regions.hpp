#pragma once

#include <string>
#include <vector>

#include "qcf/functional.hpp"

namespace qcf {

enum class RegionSystemId { thm13_n3, thm13_n5plus, lem31_n3, lem31_n5plus };

RegionSystemId region_system_from_string(const std::string& s);
std::string to_string(RegionSystemId id);

struct RegionSystem {
    RegionSystemId id;
    int n;  // ignored for the n = 3 systems
};

// n >= 5 required for the n5plus systems; n = 4 is rejected.
RegionSystem make_region_system(RegionSystemId id, int n = 3);

struct RegionVerdict {
    bool feasible = false;
    int first_fail = 0;           // 1-based index of the first failed condition, 0 if none
    bool s_margin_flag = false;   // set when 1 + 4s <= 0 (boundary assumption, flagged only)
    std::vector<double> values;   // condition values in listed order (sign-adjusted: >0 pass)
};

RegionVerdict feasible(const RegionSystem& sys, double t, double s);

struct RegionReport {
    int res_t = 0, res_s = 0;
    std::vector<double> t_nodes, s_nodes;
    std::vector<RegionVerdict> verdicts;  // row-major, t outer, s inner
    long feasible_count = 0;
    std::string csv;  // header t,s,feasible,first_fail
};

RegionReport scan(const RegionSystem& sys, double t_lo, double t_hi, double s_lo, double s_hi,
                  int res_t, int res_s);

struct PinchResult {
    double margin = 0.0;     // min over nodes, normalized; > 0 means pinching holds
    long worst_node = -1;
    bool degenerate = false;  // R = 0 and E = 0 everywhere (boundary case)
};

// Cross-multiplied pointwise pinching check; n = 4 rejected.
PinchResult pinch_check(const ChartMetric& m, const QuadParams& p);

}  // namespace qcf
