#include "primmdebug/stages/stage.hpp"

#include <locale.h>
#include <wctype.h>

#include <cstdint>

namespace primmdebug {

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kPredict: return "Predict";
    case Stage::kRun: return "Run";
    case Stage::kSpotTheDefect: return "SpotTheDefect";
    case Stage::kInspectTheCode: return "InspectTheCode";
    case Stage::kFindTheError: return "FindTheError";
    case Stage::kFixTheError: return "FixTheError";
    case Stage::kTest: return "Test";
    case Stage::kModify: return "Modify";
    case Stage::kMake: return "Make";
  }
  return "?";
}

std::optional<Stage> stage_from_string(std::string_view name) {
  for (Stage s : kAllStages) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view to_string(ResponseRequirement r) {
  switch (r) {
    case ResponseRequirement::kRequired: return "required";
    case ResponseRequirement::kOptional: return "optional";
    case ResponseRequirement::kNone: return "none";
  }
  return "?";
}

std::string_view to_string(ResponseKind k) {
  switch (k) {
    case ResponseKind::kFreeText: return "free_text";
    case ResponseKind::kLineSelectOrFreeText: return "line_select_or_free_text";
    case ResponseKind::kSelfReport: return "self_report";
  }
  return "?";
}

StagePolicy policy(Stage stage) {
  using R = ResponseRequirement;
  using K = ResponseKind;
  switch (stage) {
    case Stage::kPredict: return {false, false, R::kRequired, K::kFreeText};
    case Stage::kRun: return {true, false, R::kNone, K::kFreeText};
    case Stage::kSpotTheDefect: return {false, false, R::kRequired, K::kFreeText};
    case Stage::kInspectTheCode: return {true, false, R::kOptional, K::kFreeText};
    case Stage::kFindTheError: return {false, false, R::kRequired, K::kLineSelectOrFreeText};
    case Stage::kFixTheError: return {false, true, R::kRequired, K::kFreeText};
    case Stage::kTest: return {true, false, R::kRequired, K::kSelfReport};
    case Stage::kModify: return {true, true, R::kOptional, K::kFreeText};
    case Stage::kMake: return {true, true, R::kNone, K::kFreeText};
  }
  return {};
}

namespace {

locale_t utf8_ctype() {
  static const locale_t loc = [] {
    locale_t l = newlocale(LC_CTYPE_MASK, "C.UTF-8", static_cast<locale_t>(nullptr));
    if (!l) l = newlocale(LC_CTYPE_MASK, "en_US.UTF-8", static_cast<locale_t>(nullptr));
    return l;
  }();
  return loc;
}

// Decodes one UTF-8 sequence at s[i]; malformed bytes decode to U+FFFD.
char32_t next_code_point(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t k) { return static_cast<std::uint8_t>(s[k]); };
  const std::uint8_t lead = byte(i);
  int extra = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    ++i;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    extra = 1;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    extra = 2;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    extra = 3;
    cp = lead & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + static_cast<std::size_t>(extra) >= s.size()) {
    i = s.size();
    return 0xFFFD;
  }
  for (int k = 1; k <= extra; ++k) {
    const std::uint8_t b = byte(i + static_cast<std::size_t>(k));
    if ((b & 0xC0) != 0x80) {
      i += static_cast<std::size_t>(k);
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += static_cast<std::size_t>(extra) + 1;
  return cp;
}

bool is_letter_or_digit(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  }
  const locale_t loc = utf8_ctype();
  if (!loc || cp == 0xFFFD) return false;
  return iswalnum_l(static_cast<wint_t>(cp), loc) != 0;
}

}  // namespace

bool validate_articulation(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_letter_or_digit(next_code_point(text, i))) return true;
  }
  return false;
}

}  // namespace primmdebug
