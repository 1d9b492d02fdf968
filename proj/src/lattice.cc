#include "brickwork/lattice.h"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace brickwork {

const char *to_string(LatticeKind kind) {
    switch (kind) {
        case LatticeKind::kBrickwork:
            return "brickwork";
        case LatticeKind::kCluster:
            return "cluster";
        case LatticeKind::kCustom:
            return "custom";
    }
    return "?";
}

const char *to_string(SiteRole role) {
    switch (role) {
        case SiteRole::kWhite:
            return "white";
        case SiteRole::kBlue:
            return "blue";
        case SiteRole::kRed:
            return "red";
        case SiteRole::kPlain:
            return "plain";
    }
    return "?";
}

Lattice::Lattice(LatticeKind kind, int m, int n, std::vector<Site> sites, std::vector<Edge> edges)
    : kind_(kind), m_(m), n_(n), sites_(std::move(sites)) {
    if (m <= 0 || n <= 0) {
        throw std::invalid_argument("lattice dimensions must be positive");
    }
    if (sites_.empty()) {
        throw std::invalid_argument("lattice has no sites");
    }
    std::set<std::pair<int, int>> coords;
    for (const auto &s : sites_) {
        if (!coords.insert({s.row, s.col}).second) {
            throw std::invalid_argument("duplicate site coordinate");
        }
        rows_ = std::max(rows_, s.row + 1);
        cols_ = std::max(cols_, s.col + 1);
    }
    if (!std::is_sorted(sites_.begin(), sites_.end(), [](const Site &a, const Site &b) {
            return std::pair(a.row, a.col) < std::pair(b.row, b.col);
        })) {
        throw std::invalid_argument("sites must be listed row-major");
    }

    adjacency_.resize(sites_.size());
    std::set<Edge> seen;
    for (auto [a, b] : edges) {
        if (a >= sites_.size() || b >= sites_.size()) {
            throw std::invalid_argument("edge endpoint is not a declared site");
        }
        if (a == b) {
            throw std::invalid_argument("self-loop edge");
        }
        Edge e = a < b ? Edge{a, b} : Edge{b, a};
        if (!seen.insert(e).second) {
            throw std::invalid_argument("duplicate edge");
        }
        edges_.push_back(e);
        adjacency_[e.first].push_back(e.second);
        adjacency_[e.second].push_back(e.first);
    }
    for (auto &adj : adjacency_) {
        std::sort(adj.begin(), adj.end());
    }

    std::size_t bound = 0;
    if (kind_ == LatticeKind::kBrickwork) {
        bound = 3;
    } else if (kind_ == LatticeKind::kCluster) {
        bound = 4;
    }
    if (bound != 0 && max_degree() > bound) {
        throw std::invalid_argument("site degree exceeds the bound for this lattice kind");
    }
}

std::size_t Lattice::max_degree() const {
    std::size_t d = 0;
    for (const auto &adj : adjacency_) {
        d = std::max(d, adj.size());
    }
    return d;
}

bool Lattice::has_edge(std::size_t a, std::size_t b) const {
    const auto &adj = adjacency_.at(a);
    return std::binary_search(adj.begin(), adj.end(), b);
}

std::optional<std::size_t> Lattice::index_of(int row, int col) const {
    auto it = std::lower_bound(sites_.begin(), sites_.end(), std::pair(row, col),
                               [](const Site &s, const std::pair<int, int> &rc) {
                                   return std::pair(s.row, s.col) < rc;
                               });
    if (it == sites_.end() || it->row != row || it->col != col) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - sites_.begin());
}

bool Lattice::operator==(const Lattice &other) const {
    if (kind_ != other.kind_ || m_ != other.m_ || n_ != other.n_ || edges_ != other.edges_ ||
        sites_.size() != other.sites_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        const auto &a = sites_[i];
        const auto &b = other.sites_[i];
        if (a.row != b.row || a.col != b.col || a.role != b.role) {
            return false;
        }
    }
    return true;
}

bool brickwork_vertical_edge(int row, int cell) { return (row % 2) == (cell % 2); }

Lattice build_brickwork(int m_cells, int n_cells, int attach_offset) {
    if (m_cells <= 0 || n_cells <= 0) {
        throw std::invalid_argument("brickwork dimensions must be positive");
    }
    if (attach_offset < 0 || attach_offset >= kCellWidth) {
        throw std::invalid_argument("attach offset must lie inside the seven-qubit cell");
    }
    const int cols = kCellWidth * n_cells;
    std::vector<Site> sites;
    sites.reserve(static_cast<std::size_t>(m_cells) * cols);
    for (int r = 0; r < m_cells; ++r) {
        for (int c = 0; c < cols; ++c) {
            // Positions whose outcomes carry the encoded angle are blue.
            const int p = c % kCellWidth;
            const bool blue = p == 0 || p == 1 || p == 3 || p == 5;
            sites.push_back({r, c, blue ? SiteRole::kBlue : SiteRole::kWhite});
        }
    }
    auto idx = [cols](int r, int c) { return static_cast<std::size_t>(r) * cols + c; };
    std::vector<Edge> edges;
    for (int r = 0; r < m_cells; ++r) {
        for (int c = 0; c + 1 < cols; ++c) {
            edges.emplace_back(idx(r, c), idx(r, c + 1));
        }
    }
    for (int r = 0; r + 1 < m_cells; ++r) {
        for (int cell = 0; cell < n_cells; ++cell) {
            if (brickwork_vertical_edge(r, cell)) {
                const int c = cell * kCellWidth + attach_offset;
                edges.emplace_back(idx(r, c), idx(r + 1, c));
            }
        }
    }
    return Lattice(LatticeKind::kBrickwork, m_cells, n_cells, std::move(sites), std::move(edges));
}

Lattice build_cluster(int rows, int cols) {
    if (rows <= 0 || cols <= 0) {
        throw std::invalid_argument("cluster dimensions must be positive");
    }
    std::vector<Site> sites;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            sites.push_back({r, c, SiteRole::kPlain});
        }
    }
    auto idx = [cols](int r, int c) { return static_cast<std::size_t>(r) * cols + c; };
    std::vector<Edge> edges;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.emplace_back(idx(r, c), idx(r, c + 1));
            if (r + 1 < rows) edges.emplace_back(idx(r, c), idx(r + 1, c));
        }
    }
    return Lattice(LatticeKind::kCluster, rows, cols, std::move(sites), std::move(edges));
}

Lattice build_custom(int rows, int cols, std::vector<Edge> edges) {
    if (rows <= 0 || cols <= 0) {
        throw std::invalid_argument("custom lattice dimensions must be positive");
    }
    std::vector<Site> sites;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            sites.push_back({r, c, SiteRole::kPlain});
        }
    }
    return Lattice(LatticeKind::kCustom, rows, cols, std::move(sites), std::move(edges));
}

const std::vector<double> &cell_angle_pattern() {
    static const std::vector<double> pattern = {
        kPiOver8, 0.0, -2 * kPiOver8, 0.0, 2 * kPiOver8, 0.0, -kPiOver8,
    };
    return pattern;
}

AngleField canonical_angle_field(const Lattice &lattice) {
    if (lattice.kind() != LatticeKind::kBrickwork) {
        throw std::invalid_argument("canonical angle field requires a brickwork lattice");
    }
    AngleField field;
    field.angles.reserve(lattice.num_sites());
    for (const auto &s : lattice.sites()) {
        field.angles.push_back(cell_angle_pattern()[s.col % kCellWidth]);
    }
    return field;
}

AngleField zero_angle_field(const Lattice &lattice) {
    AngleField field;
    field.angles.assign(lattice.num_sites(), 0.0);
    return field;
}

void validate_field(const Lattice &lattice, const AngleField &field) {
    if (field.angles.size() != lattice.num_sites()) {
        throw std::invalid_argument("angle field does not cover every lattice site");
    }
}

std::size_t brickwork_site_count(int m_cells, int n_cells) {
    return static_cast<std::size_t>(kCellWidth) * m_cells * n_cells;
}

std::size_t brickwork_edge_count(int m_cells, int n_cells) {
    const std::size_t m = m_cells;
    const std::size_t n = n_cells;
    const std::size_t horizontal = m * (kCellWidth * n - 1);
    // Even row pairs couple in even cells, odd row pairs in odd cells.
    const std::size_t even_pairs = m / 2;
    const std::size_t odd_pairs = (m - 1) / 2;
    return horizontal + even_pairs * ((n + 1) / 2) + odd_pairs * (n / 2);
}

namespace {

LatticeKind parse_kind(const std::string &s) {
    if (s == "brickwork") return LatticeKind::kBrickwork;
    if (s == "cluster") return LatticeKind::kCluster;
    if (s == "custom") return LatticeKind::kCustom;
    throw std::invalid_argument("unknown lattice kind: " + s);
}

}  // namespace

LatticeSpec lattice_spec_from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("lattice spec is not valid JSON: ") + e.what());
    }
    try {
        const auto kind = parse_kind(j.at("kind").get<std::string>());
        const int m = j.at("m").get<int>();
        const int n = j.at("n").get<int>();
        std::optional<Lattice> lattice;
        switch (kind) {
            case LatticeKind::kBrickwork:
                lattice.emplace(build_brickwork(m, n));
                break;
            case LatticeKind::kCluster:
                lattice.emplace(build_cluster(m, n));
                break;
            case LatticeKind::kCustom: {
                std::vector<Edge> edges;
                for (const auto &e : j.at("edges")) {
                    edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
                }
                lattice.emplace(build_custom(m, n, std::move(edges)));
                break;
            }
        }
        AngleField field = kind == LatticeKind::kBrickwork ? canonical_angle_field(*lattice)
                                                           : zero_angle_field(*lattice);
        if (j.contains("angles")) {
            for (const auto &[key, value] : j.at("angles").items()) {
                const std::size_t i = std::stoul(key);
                if (i >= lattice->num_sites()) {
                    throw std::invalid_argument("angle assigned to undeclared site " + key);
                }
                field.angles[i] = value.get<double>();
            }
        }
        if (j.contains("J")) {
            field.coupling = j.at("J").get<double>();
        }
        return {std::move(*lattice), std::move(field)};
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("malformed lattice spec: ") + e.what());
    }
}

std::string lattice_spec_to_json(const Lattice &lattice, const AngleField &field) {
    nlohmann::json j;
    j["kind"] = to_string(lattice.kind());
    j["m"] = lattice.m();
    j["n"] = lattice.n();
    if (lattice.kind() == LatticeKind::kCustom) {
        j["edges"] = nlohmann::json::array();
        for (auto [a, b] : lattice.edges()) {
            j["edges"].push_back({a, b});
        }
    }
    nlohmann::json angles = nlohmann::json::object();
    for (std::size_t i = 0; i < field.angles.size(); ++i) {
        angles[std::to_string(i)] = field.angles[i];
    }
    j["angles"] = angles;
    j["J"] = field.coupling;
    return j.dump();
}

}  // namespace brickwork
