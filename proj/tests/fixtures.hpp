#pragma once

// Manifest fixtures whose group means land on exact published-table offsets.

#include <cstddef>
#include <string>
#include <vector>

#include "fairsynth/manifest.hpp"

namespace fixtures {

// One record whose prompt-hypothesis WER is word_subs/200 and CER is
// char_subs/600, with a perfect generated hypothesis, so delta_wer and
// delta_cer equal those fractions exactly.
//
// The reference is 199 two-character words plus one three-character word:
// 200 word tokens and 600 character tokens (401 letters + 199 spaces). The
// prompt hypothesis replaces `char_subs - word_subs` words fully ("qq") and
// `2*word_subs - char_subs` words in one character ("qa"). Substituted words
// and characters match nothing in the reference, so the alignment cost is
// exactly word_subs at the word level and char_subs at the character level.
inline fairsynth::UtteranceRecord delta_record(const std::string& utt_id,
                                               const std::string& severity,
                                               std::size_t word_subs, std::size_t char_subs) {
  const std::size_t full = char_subs - word_subs;      // words changed in 2 chars
  const std::size_t partial = 2 * word_subs - char_subs;  // words changed in 1 char

  std::string ref;
  std::string hyp;
  for (std::size_t i = 0; i < 200; ++i) {
    if (i > 0) {
      ref += ' ';
      hyp += ' ';
    }
    const std::string ref_word = i == 199 ? "aaa" : "aa";
    ref += ref_word;
    if (i < full) {
      hyp += "qq";
    } else if (i < full + partial) {
      hyp += "qa";
    } else {
      hyp += ref_word;
    }
  }

  fairsynth::UtteranceRecord rec;
  rec.utt_id = utt_id;
  rec.speaker_id = "spk_" + severity;
  rec.groups["severity"] = severity;
  rec.ref_text = ref;
  rec.hyp_prompt_text = hyp;
  rec.hyp_generated_text = ref;
  return rec;
}

// Per-severity records reproducing the published severity-table offsets:
// delta_wer means 0.10 / 0.125 / 0.51 / 0.62 (offsets 0.025, 0.41, 0.52) and
// delta_cer means 0.05 / 0.06 / 0.27 / 0.33 (offsets 0.01, 0.22, 0.28).
inline std::vector<fairsynth::UtteranceRecord> severity_delta_records() {
  return {
      delta_record("utt_healthy", "healthy", 20, 30),
      delta_record("utt_low", "low", 25, 36),
      delta_record("utt_mid", "mid", 102, 162),
      delta_record("utt_high", "high", 124, 198),
  };
}

// SIM-o means 0.60 / 0.486 / 0.51 for healthy / mid / high.
inline std::vector<fairsynth::UtteranceRecord> severity_simo_records() {
  auto make = [](const std::string& utt_id, const std::string& severity, double simo) {
    fairsynth::UtteranceRecord rec;
    rec.utt_id = utt_id;
    rec.speaker_id = "spk_" + severity;
    rec.groups["severity"] = severity;
    rec.ref_text = "aa";
    rec.simo_precomputed = simo;
    return rec;
  };
  return {
      make("utt_healthy", "healthy", 0.60),
      make("utt_mid", "mid", 0.486),
      make("utt_high", "high", 0.51),
  };
}

}  // namespace fixtures
