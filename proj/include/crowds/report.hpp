#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>

#include "crowds/observer.hpp"

namespace crowds {

/// Layout knobs for the summary plot. Bars span [0,1] on the X axis
/// ("proportion of total"), bar height is S on a log Y axis, bar darkness is
/// D relative to the table's max D, and a black line tracks pi. Rendering is
/// a pure function of (table, spec, titles).
struct PlotSpec {
    /// Primary sort key; remaining keys (S, D, node id) break ties in that
    /// fixed order, everything ascending.
    enum class SortKey { pi, s, d, node };
    SortKey sort_key = SortKey::pi;

    double panel_width = 560.0;
    double panel_height = 300.0;
    /// 0 = derive the log-axis top from the data (shared across panels).
    double y_max = 0.0;
};

/// CSV with header `node,S,D,pi,h`, one row per node, id ascending.
/// write(read(write(t))) is byte-identical to write(t).
std::string write_profile_csv(const ProfileTable& table);

/// Inverse of write_profile_csv. Throws ParseError on malformed input
/// (naming the line) and ValidationError on duplicate node ids.
ProfileTable read_profile_csv(std::istream& in);

/// One-panel summary plot as a standalone SVG 1.1 document.
/// Throws ValidationError if the table is empty.
std::string render_sullivan_plot(const ProfileTable& table,
                                 const PlotSpec& spec = {},
                                 std::string_view title = {});

/// Side-by-side panels (left to right, given order) sharing one log Y scale.
/// Throws ValidationError naming the offending panel if any table is empty.
std::string render_multi_panel(
    std::span<const std::pair<std::string, ProfileTable>> panels,
    const PlotSpec& spec = {});

} // namespace crowds
