// Copyright 2026 The stabcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STABCERT_IO_H
#define STABCERT_IO_H

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"
#include "stabcert/certificates.h"
#include "stabcert/gf2.h"
#include "stabcert/polytope.h"
#include "stabcert/runner.h"
#include "stabcert/syndrome.h"

namespace stabcert {

using Json = nlohmann::ordered_json;

/// Labels are "u" followed by the lowercase hex encoding.
Json label_to_json(Label u);
Label label_from_json(int n, const Json &j);

/// Gauges are JSON arrays of labels; n is the array length.
Json gauge_to_json(const Gauge &g);
Gauge gauge_from_json(const Json &j);

Json distribution_to_json(const SyndromeDistribution &p);
SyndromeDistribution distribution_from_json(const Json &j);
/// Rows "syndrome_hex,prob" after a header line.
void write_distribution_csv(std::ostream &out, const SyndromeDistribution &p);
SyndromeDistribution read_distribution_csv(int n, std::istream &in);

Json spectrum_to_json(const WalshSpectrum &s);
void write_spectrum_csv(std::ostream &out, const WalshSpectrum &s);

/// {n, constraints: [{label, kind, values}]}; exact entries carry one value, bands two.
Json constraints_to_json(const ConstraintSet &c);
ConstraintSet constraints_from_json(const Json &j);

/// {status, L, U, width, witnesses?}.
Json endpoint_to_json(const EndpointResult &r, bool include_witnesses);

/// Input of the one-gauge command: {mu: [...], gauge?: [...], m?, delta?}.
struct OneGaugeInput {
    std::vector<double> mu;
    std::optional<Gauge> gauge;
    std::optional<double> m;
    std::optional<double> delta;
};
OneGaugeInput one_gauge_input_from_json(const Json &j);
Json one_gauge_to_json(const OneGaugeCertificate &c);

/// Full trace; wall times only when `timing` is set so that files are reproducible.
Json trace_to_json(const RunTrace &trace, bool timing);

/// Per-round rows: trial, policy, t, L, U, W, m_t, D_t, new_labels.
void write_rounds_csv_header(std::ostream &out);
void write_rounds_csv(std::ostream &out, int trial, const std::string &arm, const RunTrace &trace);

Json ensemble_to_json(const EnsembleResult &result);

/// Shortest round-trip decimal text for a double.
std::string format_double(double x);

}  // namespace stabcert

#endif
