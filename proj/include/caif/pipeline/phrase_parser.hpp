#pragma once

#include <string_view>

#include "caif/pipeline/intent.hpp"

namespace caif::pipeline {

// Pattern-based extraction of one utterance. Recognized phrases:
//   "cell 1", "cell ID 1"         -> cell_id
//   "slice 2", "slice ID 2"       -> slice_id
//   "downlink"/"DL", "uplink"/"UL" -> metric
//   increase|raise|boost|enhance|improve, decrease|reduce|lower|cut|throttle -> action
//   "by 20%", "by 20 percent"     -> magnitude_pct
//   "in 5 minutes", "in 30 seconds", "in 1 hour" -> deadline_s
// Provenance of every extracted field is set to `turn_index`.
StructuredIntent extract_utterance(std::string_view text, int turn_index);

// Iterative filling over the operator turns: later turns override earlier
// values for the same field. System turns are ignored.
StructuredIntent extract_conversation(const Conversation& conversation);

}  // namespace caif::pipeline
