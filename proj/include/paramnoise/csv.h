// Copyright 2026 The paramnoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PARAMNOISE_CSV_H_
#define PARAMNOISE_CSV_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace paramnoise {

// Nine significant digits ("%.9g"); "nan" / "inf" / "-inf" for non-finite.
std::string FormatDouble(double x);

// Value a double takes after a FormatDouble / ParseDouble round trip.
double Quantize(double x);

// strtod over the whole field; throws Error(kConfigParse) on junk.
double ParseDouble(std::string_view text);

std::vector<std::string> SplitCsvLine(std::string_view line);

// Writes via a sibling temp file and rename, so readers never observe a
// partially written file. Throws Error(kIoError).
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents);

std::string ReadFile(const std::filesystem::path& path);

}  // namespace paramnoise

#endif  // PARAMNOISE_CSV_H_
