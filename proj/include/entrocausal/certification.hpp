#pragma once

#include "entrocausal/constraints.hpp"
#include "entrocausal/distributions.hpp"
#include "entrocausal/lp.hpp"

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace entrocausal {

class CertificationError : public std::runtime_error {
public:
    // SumMismatch: the file parses but its declared contradiction constant
    // differs from the combination of its rows.
    enum class Kind { DimensionMismatch, NonEntropicPoint, MalformedCertificate, SumMismatch };

    CertificationError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Marginal component name -> enclosure of its value in bits.
using EntropyPoint = std::map<std::string, Interval>;

EntropyPoint to_point(const EntropyEnclosure& enclosure);
EntropyPoint exact_point(const std::map<std::string, Rational>& values);

enum class Verdict {
    // The entropic relaxation has a solution at the exact entropy values. This
    // is not a claim that the distribution is realizable.
    Compatible,
    // No point of a box containing the enclosure satisfies the constraints;
    // carries a verified Farkas certificate.
    Incompatible,
    // The enclosure is not a point and every widened box meets the relaxation.
    Inconclusive,
};

std::string_view verdict_name(Verdict verdict);

struct CertificateRow {
    RationalRow row;         // over the system's columns
    Rational multiplier;     // >= 0 for inequalities
    std::string provenance;  // constraint family and detail, or "pin H(..)"
};

struct CertificationResult {
    Verdict verdict = Verdict::Compatible;
    std::vector<std::string> columns;
    // Incompatible: the rows with nonzero multipliers; their combination has
    // all-zero coefficients and a negative constant.
    std::vector<CertificateRow> certificate;
    // Compatible: a solution of the relaxation.
    std::vector<Rational> point;
    EntropyPoint pinned;
    std::vector<std::string> notes;  // constraint families used
};

// Builds the constraint system for the structure and theory, adds the box
// lower <= H(c) <= upper for every marginal component and decides
// feasibility. Throws DimensionMismatch if the point does not name exactly the
// marginal components, NonEntropicPoint if the box misses the Shannon cone of
// the observed components.
CertificationResult certify(const CausalStructure& structure, const GenerationOptions& options,
                            const EntropyPoint& point);

struct ViolatedRow {
    Row row;
    // Largest value of the row's left-hand side over the enclosure box; negative.
    Rational slack;
};

// Rows of a system over marginal columns that every point of the box violates,
// most violated first. Throws DimensionMismatch when a column has no value.
std::vector<ViolatedRow> violated_inequalities(const InequalitySystem& projected, const EntropyPoint& point);

// Certificate file:
//   columns <TAB> name ...
//   row <TAB> multiplier <TAB> >=|= <TAB> constant <TAB> coeff*name ... <TAB> provenance
//   sum <TAB> constant            (the contradiction 0 >= -constant after combining)
void write_certificate(std::ostream& out, const CertificationResult& result);
std::vector<CertificateRow> read_certificate(std::istream& in, std::vector<std::string>& columns);

// True iff multipliers of inequalities are nonnegative and the combination is
// a contradiction (all coefficients zero, constant negative).
bool verify_certificate(const std::vector<CertificateRow>& rows);

// Additionally checks that every non-pin row is a constraint of the system
// generated for the structure and options, and that pin rows are single-column bounds.
bool verify_certificate(const std::vector<CertificateRow>& rows, const std::vector<std::string>& columns,
                        const CausalStructure& structure, const GenerationOptions& options);

}  // namespace entrocausal
