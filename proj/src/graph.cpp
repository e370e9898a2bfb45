#include "crowds/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>

namespace crowds {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

bool is_field_sep(char c) { return c == ',' || is_space(c); }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

void split_fields(std::string_view s, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_field_sep(s[i])) ++i;
        std::size_t start = i;
        while (i < s.size() && !is_field_sep(s[i])) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
}

bool parse_double(std::string_view s, double& value) {
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    return ec == std::errc{} && ptr == end;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string at_line(std::size_t lineno, std::string_view msg) {
    std::string s = "line ";
    s += std::to_string(lineno);
    s += ": ";
    s += msg;
    return s;
}

} // namespace

const std::vector<std::string> TestimonialGraph::kNoAttrs{};

std::string_view to_string(Direction d) {
    switch (d) {
    case Direction::predecessors: return "predecessors";
    case Direction::successors: return "successors";
    case Direction::neighbors: return "neighbors";
    }
    return "predecessors";
}

void ObserverParams::validate() const {
    if (m_max < 1) throw ValidationError("m_max must be at least 1");
    if (k_max < 2) throw ValidationError("k_max must be at least 2");
    // Distances are held in 8-bit rows; 0xFF is reserved for "unreached".
    if (m_max > 200) throw ValidationError("m_max above 200 is not supported");
}

std::optional<NodeIndex> TestimonialGraph::find(std::string_view id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return std::nullopt;
    return static_cast<NodeIndex>(it - ids_.begin());
}

NodeIndex TestimonialGraph::require(std::string_view id) const {
    if (auto i = find(id)) return *i;
    throw NotFoundError("node '" + std::string(id) + "' not in graph");
}

double TestimonialGraph::total_weight(NodeIndex u, NodeIndex v) const {
    if (!directed_ && u > v) std::swap(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair(u, v),
                               [](const Edge& e, const std::pair<NodeIndex, NodeIndex>& key) {
                                   return std::pair(e.from, e.to) < key;
                               });
    if (it == edges_.end() || it->from != u || it->to != v) return 0.0;
    return it->weight;
}

std::span<const NodeIndex> TestimonialGraph::out_neighbors(NodeIndex i) const {
    return {out_nbr_.data() + out_off_[i], out_off_[i + 1] - out_off_[i]};
}

std::span<const NodeIndex> TestimonialGraph::in_neighbors(NodeIndex i) const {
    return {in_nbr_.data() + in_off_[i], in_off_[i + 1] - in_off_[i]};
}

std::span<const NodeIndex> TestimonialGraph::neighbors(NodeIndex i) const {
    return {und_nbr_.data() + und_off_[i], und_off_[i + 1] - und_off_[i]};
}

std::span<const std::string> TestimonialGraph::attributes(NodeIndex i) const {
    if (i >= attrs_.size()) return kNoAttrs;
    return attrs_[i];
}

std::span<const std::string> TestimonialGraph::attributes(std::string_view id) const {
    return attributes(require(id));
}

std::span<const std::uint32_t> TestimonialGraph::attribute_ids(NodeIndex i) const {
    return attr_ids_[i];
}

std::span<const NodeIndex> TestimonialGraph::sources_of(NodeIndex n, Direction d) const {
    switch (d) {
    case Direction::predecessors: return in_neighbors(n);
    case Direction::successors: return out_neighbors(n);
    case Direction::neighbors: return neighbors(n);
    }
    return in_neighbors(n);
}

std::vector<NodeId> TestimonialGraph::sources_of(std::string_view n, Direction d) const {
    std::vector<NodeId> out;
    for (NodeIndex s : sources_of(require(n), d)) out.push_back(ids_[s]);
    return out;
}

int TestimonialGraph::degree(NodeIndex i) const { return degree_[i]; }

bool TestimonialGraph::operator==(const TestimonialGraph& other) const {
    return directed_ == other.directed_ && ids_ == other.ids_ && edges_ == other.edges_ &&
           attrs_ == other.attrs_;
}

void TestimonialGraph::rebuild_attr_ids() {
    attr_vocab_.clear();
    for (const auto& set : attrs_)
        attr_vocab_.insert(attr_vocab_.end(), set.begin(), set.end());
    std::sort(attr_vocab_.begin(), attr_vocab_.end());
    attr_vocab_.erase(std::unique(attr_vocab_.begin(), attr_vocab_.end()), attr_vocab_.end());

    std::unordered_map<std::string_view, std::uint32_t> lookup;
    lookup.reserve(attr_vocab_.size());
    for (std::uint32_t i = 0; i < attr_vocab_.size(); ++i) lookup.emplace(attr_vocab_[i], i);

    attr_ids_.assign(attrs_.size(), {});
    for (std::size_t n = 0; n < attrs_.size(); ++n) {
        attr_ids_[n].reserve(attrs_[n].size());
        for (const auto& token : attrs_[n]) attr_ids_[n].push_back(lookup.at(token));
    }
}

GraphBuilder& GraphBuilder::add_node(std::string id) {
    pending_nodes_.push_back(std::move(id));
    return *this;
}

GraphBuilder& GraphBuilder::add_edge(std::string u, std::string v, double weight) {
    pending_edges_.emplace_back(std::move(u), std::move(v), weight);
    return *this;
}

GraphBuilder& GraphBuilder::set_attributes(std::string id, std::vector<std::string> attrs) {
    pending_attrs_.emplace_back(std::move(id), std::move(attrs));
    return *this;
}

TestimonialGraph GraphBuilder::build() {
    std::vector<NodeId> ids = pending_nodes_;
    for (const auto& [u, v, w] : pending_edges_) {
        (void)w;
        ids.push_back(u);
        ids.push_back(v);
    }
    for (const auto& [n, attrs] : pending_attrs_) {
        (void)attrs;
        ids.push_back(n);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    std::unordered_map<std::string_view, NodeIndex> index;
    index.reserve(ids.size());
    for (NodeIndex i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);

    // Weights of parallel entries accumulate in insertion order per pair,
    // so rebuilding from identical input reproduces identical doubles.
    std::map<std::pair<NodeIndex, NodeIndex>, double> collapsed;
    for (const auto& [us, vs, w] : pending_edges_) {
        NodeIndex u = index.at(us);
        NodeIndex v = index.at(vs);
        if (!directed_ && u > v) std::swap(u, v);
        collapsed[{u, v}] += w;
    }

    TestimonialGraph g;
    g.directed_ = directed_;
    g.ids_ = std::move(ids);
    const std::size_t n = g.ids_.size();

    g.edges_.reserve(collapsed.size());
    for (const auto& [pair, w] : collapsed) g.edges_.push_back({pair.first, pair.second, w});

    std::vector<std::vector<NodeIndex>> out(n), in(n), und(n);
    g.degree_.assign(n, 0);
    for (const Edge& e : g.edges_) {
        ++g.degree_[e.from];
        ++g.degree_[e.to];
        if (e.from == e.to) continue;
        out[e.from].push_back(e.to);
        in[e.to].push_back(e.from);
        if (!directed_) {
            out[e.to].push_back(e.from);
            in[e.from].push_back(e.to);
        }
        und[e.from].push_back(e.to);
        und[e.to].push_back(e.from);
    }

    auto flatten = [n](std::vector<std::vector<NodeIndex>>& lists,
                       std::vector<std::uint32_t>& off, std::vector<NodeIndex>& nbr) {
        off.assign(n + 1, 0);
        for (auto& list : lists) {
            std::sort(list.begin(), list.end());
            list.erase(std::unique(list.begin(), list.end()), list.end());
        }
        for (std::size_t i = 0; i < n; ++i)
            off[i + 1] = off[i] + static_cast<std::uint32_t>(lists[i].size());
        nbr.clear();
        nbr.reserve(off[n]);
        for (const auto& list : lists) nbr.insert(nbr.end(), list.begin(), list.end());
    };
    flatten(out, g.out_off_, g.out_nbr_);
    flatten(in, g.in_off_, g.in_nbr_);
    flatten(und, g.und_off_, g.und_nbr_);

    g.attrs_.assign(n, {});
    for (auto& [id, attrs] : pending_attrs_) g.attrs_[index.at(id)] = attrs;
    for (auto& set : g.attrs_) {
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
    }
    g.rebuild_attr_ids();
    return g;
}

TestimonialGraph load_edge_list(std::istream& text, bool directed, bool weighted) {
    GraphBuilder builder(directed);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string_view> fields;
    while (std::getline(text, line)) {
        ++lineno;
        std::string_view s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        split_fields(s, fields);
        if (fields.size() < 2 || fields.size() > 3)
            throw ParseError(at_line(lineno, "expected 'u v' or 'u v w'"));
        double w = 1.0;
        if (fields.size() == 3 && weighted) {
            if (!parse_double(fields[2], w))
                throw ParseError(at_line(lineno, "bad weight '" + std::string(fields[2]) + "'"));
            if (!std::isfinite(w))
                throw ValidationError(at_line(lineno, "weight must be finite"));
            if (w < 0.0)
                throw ValidationError(at_line(lineno, "weight must be non-negative"));
        }
        builder.add_edge(std::string(fields[0]), std::string(fields[1]), w);
    }
    if (text.bad()) throw IoError("error reading edge list stream");
    return builder.build();
}

TestimonialGraph load_attributes(const TestimonialGraph& graph, std::istream& text,
                                 std::vector<std::string>* warnings) {
    const std::size_t n = graph.node_count();
    std::vector<std::vector<std::string>> sets(n);
    for (NodeIndex i = 0; i < n; ++i) {
        auto current = graph.attributes(i);
        sets[i].assign(current.begin(), current.end());
    }

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(text, line)) {
        ++lineno;
        std::string_view s = trim(line);
        if (s.empty() || s.front() == '#') continue;

        std::size_t sep = 0;
        while (sep < s.size() && !is_field_sep(s[sep])) ++sep;
        if (sep == 0 || sep == s.size())
            throw ParseError(at_line(lineno, "expected 'node,attr1;attr2;...'"));
        std::string_view node = s.substr(0, sep);
        std::string_view rest = s.substr(sep);
        while (!rest.empty() && is_field_sep(rest.front())) rest.remove_prefix(1);
        if (rest.empty())
            throw ParseError(at_line(lineno, "node '" + std::string(node) + "' has no attributes"));

        std::vector<std::string_view> tokens;
        std::size_t start = 0;
        while (start <= rest.size()) {
            std::size_t end = rest.find(';', start);
            if (end == std::string_view::npos) end = rest.size();
            std::string_view token = trim(rest.substr(start, end - start));
            if (token.empty())
                throw ValidationError(at_line(lineno, "empty attribute token"));
            tokens.push_back(token);
            start = end + 1;
        }

        auto idx = graph.find(node);
        if (!idx) {
            if (warnings)
                warnings->push_back(at_line(lineno, "unknown node '" + std::string(node) + "'"));
            continue;
        }
        for (std::string_view token : tokens) sets[*idx].emplace_back(token);
    }
    if (text.bad()) throw IoError("error reading attribute stream");

    GraphBuilder builder(graph.directed());
    for (const NodeId& id : graph.node_ids()) builder.add_node(id);
    for (const Edge& e : graph.edges())
        builder.add_edge(graph.id_of(e.from), graph.id_of(e.to), e.weight);
    for (NodeIndex i = 0; i < n; ++i)
        if (!sets[i].empty()) builder.set_attributes(graph.id_of(i), std::move(sets[i]));
    return builder.build();
}

void write_edge_list(const TestimonialGraph& graph, std::ostream& out,
                     std::vector<std::string>* warnings) {
    std::vector<char> covered(graph.node_count(), 0);
    for (const Edge& e : graph.edges()) {
        covered[e.from] = 1;
        covered[e.to] = 1;
        out << graph.id_of(e.from) << ' ' << graph.id_of(e.to);
        if (e.weight != 1.0) out << ' ' << format_double(e.weight);
        out << '\n';
    }
    if (warnings)
        for (NodeIndex i = 0; i < covered.size(); ++i)
            if (!covered[i])
                warnings->push_back("isolated node '" + graph.id_of(i) + "' not representable");
    if (!out) throw IoError("error writing edge list stream");
}

} // namespace crowds
