#pragma once

#include "knotspan/curves.hpp"

#include <nlohmann/json_fwd.hpp>

#include <array>
#include <string>
#include <vector>

namespace knotspan::families {

using curves::PolygonalCurve;
using curves::SampledCurve;

constexpr double kClearance = 0.01;

/// One strand of a 4-braid block, from bottom position `from` to top
/// position `to` (positions 0..3 from left to right).
struct BraidStrand {
    std::size_t from = 0;
    std::size_t to = 0;
    std::vector<Point3> points;
};

/// Strands are stored by bottom position. Endpoints sit at x = position *
/// spacing, y = 0, z = 0 or z = height, with vertical end segments.
struct BraidEmbedding {
    std::string word;
    std::vector<BraidStrand> strands;
    double height = 0.0;
    double spacing = 1.0;

    std::size_t segment_count() const;
    double length() const;
    /// Permutation bottom position -> top position.
    std::array<std::size_t, 4> permutation() const;
    void validate(const Tolerance& tol = {}) const;
};

/// The sigma_1 sigma_2^{-1} block: 12 segments, unit total length.
BraidEmbedding alpha_block();
/// n copies on top of each other, strands joined through the permutation.
BraidEmbedding stack(const BraidEmbedding& b, std::size_t n);
/// Reflection z -> height - z; realizes the inverse braid.
BraidEmbedding mirrored(const BraidEmbedding& b);

struct ClosingArc {
    std::string name;  // "a".."h"
    std::vector<Point3> points;
};

struct KnCurve {
    std::size_t n = 0;
    PolygonalCurve curve;
    double r0 = kClearance;
    double leg = 0.0;           // common vertical leg of the closing arcs
    double braid_spacing = 0.0; // horizontal strand spacing after scaling
    std::vector<ClosingArc> arcs;
    std::vector<double> top_edge_lengths;
    std::vector<double> bottom_edge_lengths;
};

/// Throws InputError for n == 0 or n > 10^4.
KnCurve generate_Kn(std::size_t n);

/// Frozen constants of the smooth families.
struct SmoothFamilyParams {
    double k = 0.0;   // thickness of Delta_n is at least k / (3n)
    double K0 = 0.0;  // curvature cap for Gamma_n
    double fillet = 0.0;  // Delta_n corner radius is fillet / n before rescaling
    /// Squeeze factor for Gamma_n braid blocks, 1/(4n^2).
    static double lambda(std::size_t n);
};

SmoothFamilyParams smooth_family_params();

/// Smooth curve together with construction data.
struct SmoothCurve {
    std::size_t n = 0;
    SampledCurve curve;
    double raw_length = 0.0;      // before rescaling to length one
    double fillet_radius = 0.0;   // after rescaling
    double hausdorff_to_kn = 0.0; // before rescaling, against K_n
    std::vector<std::pair<std::size_t, std::size_t>> braid_samples;  // sample index ranges
};

/// K_n with every corner replaced by a circular fillet of radius
/// blend * fillet / n, then rescaled to length one. blend in (0, 1] traces
/// an isotopy towards K_n. Throws Error when a fillet does not fit its edges.
SmoothCurve generate_Delta(std::size_t n, double blend = 1.0);

/// Braid blocks filleted at a fixed radius, squeezed by lambda_n towards the
/// vertical and stacked; closing lobes converge to fixed curves as n grows.
SmoothCurve generate_Gamma(std::size_t n);

enum class Family { Kn, Delta, Gamma };

Family family_from_string(const std::string& s);
std::string to_string(Family f);

struct FamilyReport {
    Family family = Family::Kn;
    std::size_t n = 0;
    std::vector<std::pair<std::string, bool>> checks;
    double length = 0.0;
    double clearance = 0.0;
    std::size_t edges = 0;
    double thickness = 0.0;
    double max_curvature = 0.0;
    bool ok() const;
};

FamilyReport verify_family(const PolygonalCurve& c, std::size_t n);
FamilyReport verify_family(const SampledCurve& c, Family f, std::size_t n);

/// Symbolic constants of the hardness argument; only c7 is ever evaluated.
struct ConstantEntry {
    std::string name;
    std::string definition;
    std::string role;
    bool numeric = false;
    double value = 0.0;
};

std::vector<ConstantEntry> theorem_constants(double r0 = kClearance);
double c7(double r0 = kClearance);

nlohmann::json to_json(const FamilyReport& r);
nlohmann::json to_json(const KnCurve& k);
nlohmann::json to_json(const std::vector<ConstantEntry>& entries);

}  // namespace knotspan::families
