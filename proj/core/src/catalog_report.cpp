#include <string>

#include "osa/catalog.hpp"
#include "osa/errors.hpp"
#include "osa/jsonio.hpp"

namespace osa {

namespace {

// Markdown table cells: pipes would split the cell, newlines would break the row.
std::string escapeCell(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '|')
      out += "\\|";
    else if (c == '\n')
      out += ' ';
    else
      out += c;
  }
  return out;
}

std::string joinLines(const std::vector<std::string>& lines) {
  std::string out;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (i) out += "<br>";
    out += lines[i];
  }
  return out;
}

const char* modeName(ScaleRelation::Mode m) {
  return m == ScaleRelation::Mode::Envelope ? "envelope" : "real";
}

ScaleRelation::Mode modeFromName(const std::string& s) {
  if (s == "envelope") return ScaleRelation::Mode::Envelope;
  if (s == "real") return ScaleRelation::Mode::Real;
  throw ValidationFailure("catalog json: unknown mode '" + s + "'");
}

MatchFlag matchFlagFromName(const std::string& s) {
  if (s == "exact") return MatchFlag::Exact;
  if (s == "scaling-only") return MatchFlag::ScalingOnly;
  if (s == "mismatch") return MatchFlag::Mismatch;
  throw ValidationFailure("catalog json: unknown match flag '" + s + "'");
}

}  // namespace

std::string render_report(const std::vector<CatalogEntry>& entries) {
  std::string md;
  md += "# Width-relation comparison\n";
  md += "\n";
  md +=
      "Conventions in force: each localized traveling solution is reduced to the "
      "triple (amplitude A, half-width L, velocity V). Time derivatives act "
      "through the traveling frame as -V per order applied to the spatial "
      "derivative; the field maps to +A; each spatial derivative contributes one "
      "factor of 1/L together with a single global sign σ (σ² = 1) shared by all "
      "odd-derivative terms, so u_x maps to ±A/L, u_xx to A/L², and so on. Parts "
      "of the literature state the first-derivative rule as u_x to ±A/L²; the "
      "one-factor-per-order reading used here is the only one consistent with the "
      "quoted third-order widths (e.g. L = |V ± 6A|^(-1/2)). Branch displays fold "
      "the independent velocity orientation into ± markers.\n";
  md += "\n";
  md +=
      "Verdicts are computed, not transcribed: **exact** means the derived and "
      "quoted forms predict the same width set at randomized admissible "
      "evaluation points; **scaling-only** means the sets differ by O(1) factors "
      "while every branch's large-amplitude growth exponent agrees; **mismatch** "
      "means even the exponents disagree. Ground truth is the derived relation, "
      "which is validated elsewhere against closed-form solutions by a residual "
      "oracle; quoted forms are reproduced as printed, never adjusted to fit.\n";
  md += "\n";
  md += "| id | equation | ansatz | derived relation | derived width | quoted form "
        "| verdict | notes |\n";
  md += "|---|---|---|---|---|---|---|---|\n";
  for (const auto& e : entries) {
    md += "| " + escapeCell(e.id);
    md += " | `" + escapeCell(e.equationSrc) + "`";
    md += " | " + (e.ansatz ? "`" + escapeCell(e.ansatz->text) + "`" : std::string("-"));
    md += " | `" + escapeCell(e.relationText) + "`";
    md += " | " + (e.engineLines.empty() ? std::string("-")
                                         : "`" + escapeCell(joinLines(e.engineLines)) + "`");
    md += " | " + escapeCell(e.literatureRelation);
    md += " | " + std::string(matchFlagName(e.matchFlag));
    md += " | " + (e.notes.empty() ? std::string("-") : escapeCell(e.notes));
    md += " |\n";
  }
  md += "\n";
  md += "## Quoted context\n";
  md += "\n";
  for (const auto& e : entries) {
    md += "- **" + e.id + "** (" + modeName(e.mode) + " mode): " + e.sourceRef + "\n";
  }
  return md;
}

std::string catalog_to_json(const std::vector<CatalogEntry>& entries) {
  JsonValue doc = JsonValue::makeObject();
  doc.object["schemaVersion"] = JsonValue::of("1");
  doc.object["kind"] = JsonValue::of("osa-catalog");
  JsonValue arr = JsonValue::makeArray();
  for (const auto& e : entries) {
    JsonValue o = JsonValue::makeObject();
    o.object["id"] = JsonValue::of(e.id);
    o.object["equationSrc"] = JsonValue::of(e.equationSrc);
    JsonValue params = JsonValue::makeArray();
    for (const auto& p : e.params) params.array.push_back(JsonValue::of(p));
    o.object["params"] = params;
    o.object["mode"] = JsonValue::of(modeName(e.mode));
    o.object["ansatz"] = e.ansatz ? JsonValue::of(e.ansatz->text) : JsonValue::null();
    o.object["literatureRelation"] = JsonValue::of(e.literatureRelation);
    o.object["sourceRef"] = JsonValue::of(e.sourceRef);
    o.object["relationText"] = JsonValue::of(e.relationText);
    JsonValue lines = JsonValue::makeArray();
    for (const auto& l : e.engineLines) lines.array.push_back(JsonValue::of(l));
    o.object["engineLines"] = lines;
    o.object["matchFlag"] = JsonValue::of(matchFlagName(e.matchFlag));
    o.object["notes"] = JsonValue::of(e.notes);
    arr.array.push_back(std::move(o));
  }
  doc.object["entries"] = std::move(arr);
  return write_json(doc);
}

std::vector<CatalogEntry> catalog_from_json(const std::string& text) {
  JsonValue doc = parse_json(text);
  if (doc.at("kind").asString() != "osa-catalog")
    throw ValidationFailure("catalog json: kind is not 'osa-catalog'");
  if (doc.at("schemaVersion").asString() != "1")
    throw ValidationFailure("catalog json: unsupported schemaVersion");
  std::vector<CatalogEntry> out;
  for (const auto& o : doc.at("entries").asArray()) {
    CatalogEntry e;
    e.id = o.at("id").asString();
    e.equationSrc = o.at("equationSrc").asString();
    for (const auto& p : o.at("params").asArray()) e.params.push_back(p.asString());
    e.mode = modeFromName(o.at("mode").asString());
    if (!o.at("ansatz").isNull()) {
      Ansatz a;
      a.text = o.at("ansatz").asString();  // display-only round-trip
      e.ansatz = a;
    }
    e.literatureRelation = o.at("literatureRelation").asString();
    e.sourceRef = o.at("sourceRef").asString();
    e.relationText = o.at("relationText").asString();
    for (const auto& l : o.at("engineLines").asArray()) e.engineLines.push_back(l.asString());
    e.matchFlag = matchFlagFromName(o.at("matchFlag").asString());
    e.notes = o.at("notes").asString();
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace osa
