#pragma once

#include <json.hpp>

#include <iosfwd>
#include <string>

#include "rumin/numerics.hpp"
#include "rumin/symbol.hpp"

namespace rumin {

// All emitted documents carry {"schema_version": 1}. Rationals serialize as
// [numerator, denominator] with int64 values when they fit and decimal
// strings otherwise; parsing accepts both, so round trips are bit exact.

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json covector_to_json(const Covector& v);
Covector covector_from_json(const Json& j);

Json e0_basis_to_json(const E0Basis& b);

Json operator_polynomial_to_json(const OperatorPolynomial& p);
OperatorPolynomial operator_polynomial_from_json(const Json& j, int n);

Json operator_matrix_to_json(const OperatorMatrix& m);
OperatorMatrix operator_matrix_from_json(const Json& j);

std::string operator_matrix_to_latex(const OperatorMatrix& m);

Json symbol_to_json(const Symbol& s);
Json left_inverse_to_json(const LeftInverse& li);

Json polyform_to_json(const PolyForm& u);
PolyForm polyform_from_json(const Json& j);

Json symbolic_decomposition_to_json(const SymbolicDecomposition& d);
Json grid_decomposition_to_json(const GridDecomposition& d);

Json gn_report_to_json(const GnReport& r);
Json dilation_report_to_json(const DilationReport& r);

std::string gn_report_to_csv(const GnReport& r, bool header);

// Flat binary form-field snapshot: magic "RFF1", little-endian u32 header
// length, JSON header (grid shape, spacings, degree, basis id), then the
// component arrays as little-endian 64-bit floats.
void write_formfield(std::ostream& os, const FormField& f);
FormField read_formfield(std::istream& is);
void write_formfield_file(const std::string& path, const FormField& f);
FormField read_formfield_file(const std::string& path);

} // namespace rumin
