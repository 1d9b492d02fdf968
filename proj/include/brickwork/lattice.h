#ifndef BRICKWORK_LATTICE_H_
#define BRICKWORK_LATTICE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "brickwork/gates.h"

namespace brickwork {

enum class LatticeKind { kBrickwork, kCluster, kCustom };
enum class SiteRole { kWhite, kBlue, kRed, kPlain };

const char *to_string(LatticeKind kind);
const char *to_string(SiteRole role);

struct Site {
    int row = 0;
    int col = 0;
    SiteRole role = SiteRole::kPlain;
};

/// Unordered site pair, stored with first < second.
using Edge = std::pair<std::size_t, std::size_t>;

/// Number of physical qubits that replace one logical white circle.
inline constexpr int kCellWidth = 7;

/// A finite qubit graph. Sites are indexed row-major over (row, col); the
/// index of a site is its bit position in amplitude indices.
///
/// Immutable after construction. The constructor rejects self-loops,
/// duplicate edges, edges to undeclared sites and degree-bound violations
/// (3 for brickwork, 4 for cluster).
class Lattice {
   public:
    /// `m` and `n` are the logical dimensions: cells for brickwork, sites for
    /// cluster and custom lattices.
    Lattice(LatticeKind kind, int m, int n, std::vector<Site> sites, std::vector<Edge> edges);

    LatticeKind kind() const { return kind_; }
    int m() const { return m_; }
    int n() const { return n_; }
    /// Physical grid extent.
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    std::size_t num_sites() const { return sites_.size(); }
    const std::vector<Site> &sites() const { return sites_; }
    const Site &site(std::size_t i) const { return sites_.at(i); }
    const std::vector<Edge> &edges() const { return edges_; }
    const std::vector<std::size_t> &neighbors(std::size_t i) const { return adjacency_.at(i); }
    std::size_t degree(std::size_t i) const { return adjacency_.at(i).size(); }
    std::size_t max_degree() const;
    bool has_edge(std::size_t a, std::size_t b) const;
    std::optional<std::size_t> index_of(int row, int col) const;

    bool operator==(const Lattice &other) const;

   private:
    LatticeKind kind_;
    int m_;
    int n_;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Site> sites_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> adjacency_;
};

/// Per-site rotation angles theta_i (radians) and the Ising coupling J.
/// The Zeeman field strength on site i is B_i = theta_i / 2.
struct AngleField {
    std::vector<double> angles;
    double coupling = kPi / 4.0;

    double field(std::size_t i) const { return angles.at(i) / 2.0; }
};

/// The brick rule: a vertical edge joins (row, cell) to (row + 1, cell)
/// iff row and cell have equal parity (0-indexed). Rows (0,1), (2,3), ...
/// are coupled in even cells; rows (1,2), (3,4), ... in odd cells.
bool brickwork_vertical_edge(int row, int cell);

/// Which of the seven physical qubits of a cell carries the vertical edge.
inline constexpr int kDefaultAttachOffset = 0;

Lattice build_brickwork(int m_cells, int n_cells, int attach_offset = kDefaultAttachOffset);
Lattice build_cluster(int rows, int cols);
/// A rows x cols grid of plain sites with caller-supplied edges.
Lattice build_custom(int rows, int cols, std::vector<Edge> edges);

/// Seven-angle cell pattern (pi/8, 0, -pi/4, 0, pi/4, 0, -pi/8).
const std::vector<double> &cell_angle_pattern();

AngleField canonical_angle_field(const Lattice &lattice);
AngleField zero_angle_field(const Lattice &lattice);

/// Throws std::invalid_argument unless the field covers every site once.
void validate_field(const Lattice &lattice, const AngleField &field);

/// Closed forms for the generated brickwork graph.
std::size_t brickwork_site_count(int m_cells, int n_cells);
std::size_t brickwork_edge_count(int m_cells, int n_cells);

struct LatticeSpec {
    Lattice lattice;
    AngleField field;
};

/// Parses {"kind", "m", "n", "edges" (custom only), "angles" (optional)}.
/// Brickwork lattices default to the canonical field, others to zero angles.
LatticeSpec lattice_spec_from_json(const std::string &text);
std::string lattice_spec_to_json(const Lattice &lattice, const AngleField &field);

}  // namespace brickwork

#endif  // BRICKWORK_LATTICE_H_
