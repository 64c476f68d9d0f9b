#pragma once

// Descriptors and JSON formats shared by the command-line tool.
//
// Non-finite doubles are written as the strings "inf", "-inf" and "nan".

#include <cstddef>
#include <string>

#include "json.hpp"
#include "perigen/algebra.hpp"
#include "perigen/embedding.hpp"
#include "perigen/operators.hpp"
#include "perigen/regularity.hpp"
#include "perigen/series.hpp"
#include "perigen/weights.hpp"

namespace perigen::io {

using json = nlohmann::json;

json number(double x);
/// Accepts numbers and the strings written by number().
double to_double(const json& j);

json read_json_file(const std::string& path);

/// gevrey:<s> or file:<path>.
WeightSequence parse_weights(const std::string& desc);
/// {"kind":"gevrey","s":1,"p_max":64} or {"kind":"table","logM":[...],"A":1,"H":2}.
WeightSequence weights_from_json(const json& j);

/// linear, power:<alpha> or file:<path> with {"r":[...]}.
RSequence parse_rsequence(const std::string& desc);
RSequence rsequence_from_json(const json& j);

UltraClass parse_class(const std::string& s);
Mode parse_mode(const std::string& s);

/// [{"k":-2,"re":0,"im":2}, ...].
TrigPoly coefficients_from_json(const json& j);
json coefficients_to_json(const TrigPoly& f);

/// delta, cot_reg, exp_decay:<mu>, exp_growth:<lambda>, sin, cos, zero or
/// file:<path>.  exp_growth uses ws.
CoefDistribution parse_distribution(const std::string& desc, const WeightSequence& ws);

/// dirichlet, cutoff:trapezoid:r=<r>:R=<R> or file:<path>.
Mollifier parse_mollifier(const std::string& desc);
Mollifier mollifier_from_json(const json& j);

/// file:<path>, structure_beurling:<lambda>, structure_roumieu, or D<p> (the
/// monomial z^p).
Ultrapolynomial parse_operator(const std::string& desc, const WeightSequence& ws,
                               UltraClass cls);
Ultrapolynomial operator_from_json(const json& j, const WeightSequence& ws, UltraClass cls);

/// dirichlet, embed:<dist>:<mollifier>, const:<preset>, scaled:<preset>:<rate>
/// (n -> e^{-rate n} preset), zero, and products a*b of those.
Net parse_net(const std::string& desc, const WeightSequence& ws, UltraClass cls,
              std::size_t n_max);

json to_json(const TailTest& t);
json to_json(const GrowthVerdict& v);
json to_json(const Lemma2MReport& r);
json to_json(const Factorization& f);
json to_json(const LowerBoundReport& r);
json to_json(const ProductReport& r);
json to_json(const CommuteReport& r);
json to_json(const RegularityVerdict& v);
json to_json(const LemmaRegReport& r);
json to_json(const RegularityReport& r);

/// Probe table of a verdict as CSV with a header row.
std::string grid_csv(const GrowthVerdict& v);

}  // namespace perigen::io
