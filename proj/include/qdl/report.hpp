#pragma once
// JSON and CSV output. Floats are written with 17 significant digits, keys in
// insertion order, so identical reports give identical bytes.

#include <string>
#include <vector>

#include "json.hpp"

#include "qdl/deltamethod.hpp"

namespace qdl {

using ojson = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

std::string format_double(double v);  // %.17g; nan/inf spelled out
std::string dump_json(const ojson& j);
// Adds schema_version and kind in front of the payload fields.
ojson make_report(const std::string& kind);

std::vector<std::string> sweep_columns();
std::string sweep_csv(const std::vector<SweepRow>& rows);
ojson sweep_json(const std::vector<SweepRow>& rows);
ojson reconstruction_json(const ReconstructionReport& r, bool with_ledger = true);

// Throws std::runtime_error when the file cannot be written.
void write_file(const std::string& path, const std::string& content);

}  // namespace qdl
