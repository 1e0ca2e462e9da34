#pragma once

#include <string>

#include <json.hpp>

#include "qmodal/context.hpp"
#include "qmodal/fit.hpp"
#include "qmodal/matrix.hpp"
#include "qmodal/simulate.hpp"
#include "qmodal/spin.hpp"

namespace qmodal {

using json = nlohmann::json;

// "%.15g" — all emitted floating-point values carry 15 significant
// digits so outputs are byte-stable regression fixtures.
std::string format_double(double v);

// Deterministic JSON emitter: keys sorted (nlohmann default), numbers at
// 15 significant digits, two-space indent.
std::string dump_json(const json& j);

json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);  // throws ParseError

json context_to_json(const Context& ctx);
Context context_from_json(const json& j);

json fit_result_to_json(const FitResult& result);

json sequence_result_to_json(const SequenceResult& result);
std::string sequence_result_to_csv(const SequenceResult& result);

json spin_representation_to_json(const SpinRepresentation& rep);

std::string transition_to_csv(const TransitionMatrix& t);
json transition_to_json(const TransitionMatrix& t);

// CSV rows of comma-separated decimals; '#' lines are skipped.
DoublyStochasticTarget target_from_csv(const std::string& text);

std::string outcome_tuple_key(const std::vector<int>& tuple);  // "(i,j,k)"

std::string read_text_file(const std::string& path);   // throws ParseError
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qmodal
