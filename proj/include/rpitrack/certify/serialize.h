// Copyright 2026 The rpitrack Authors
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

#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "rpitrack/certify/certificate.h"
#include "rpitrack/certify/text_format.h"

namespace rpitrack::certify {

inline constexpr int kCertificateFormat = 1;

/// Sections [certificate] (format, dimensions, gamma, rho), [gains],
/// [integral_bounds] and [matrices]. Numbers use %.17g so a read after a
/// write reproduces every bit.
void WriteCertificate(std::ostream& os, const Certificate& cert);

/// Throws ParseError for malformed text or inconsistent dimensions.
Certificate ReadCertificate(const TextDocument& doc);
Certificate ReadCertificate(std::istream& is);
Certificate ReadCertificateFile(const std::string& path);

}  // namespace rpitrack::certify
