#pragma once

#include <string>

#include "wcv/curve.hpp"

namespace wcv {

// JSON round-trips. Exact entries are written as "p/q" strings so the
// trip is lossless; floating entries are plain numbers. indent < 0
// writes compact output.

std::string to_json_string(const Matrix& m, int indent = -1);
std::string to_json_string(const Partition& pi, int indent = -1);
std::string to_json_string(const LeviChain& chain, int indent = -1);
std::string to_json_string(const IrregularType& q, int indent = -1);
std::string to_json_string(const UnfoldingParams& up, int indent = -1);
std::string to_json_string(const SpaceModel& m, int indent = -1);
std::string to_json_string(const SpacePoint& p, int indent = -1);
std::string to_json_string(const UnfoldResult& r, int indent = -1);
std::string to_json_string(const CurveData& c, int indent = -1);
std::string to_json_string(const RepPoint& rp, int indent = -1);

Matrix matrix_from_json(const std::string& text);
Partition partition_from_json(const std::string& text);
LeviChain levi_chain_from_json(const std::string& text);
IrregularType irregular_type_from_json(const std::string& text);
UnfoldingParams unfolding_params_from_json(const std::string& text);
SpaceModel space_model_from_json(const std::string& text);
SpacePoint space_point_from_json(const std::string& text);
UnfoldResult unfold_result_from_json(const std::string& text);
CurveData curve_from_json(const std::string& text);
RepPoint rep_point_from_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace wcv
