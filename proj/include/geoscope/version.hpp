#pragma once

namespace geoscope {

inline constexpr const char* kToolName = "geoscope";
inline constexpr const char* kToolVersion = "0.1.0";

// Version of the machine analysis document; bumped whenever any field
// changes meaning.
inline constexpr const char* kDocumentSchemaVersion = "1";

}  // namespace geoscope
