#include "scanfig/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include "json.hpp"

#include "scanfig/error.hpp"

namespace scanfig {

using nlohmann::json;

namespace {

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what(), e.byte == 0 ? 0 : e.byte - 1);
  }
}

double number_field(const json& obj, const char* key, const std::string& page) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw ParseError("page '" + page + "': region is missing numeric '" + key + "'");
  }
  return it->get<double>();
}

json coordinate(double v) {
  if (std::floor(v) == v && std::abs(v) < 9007199254740992.0) {
    return json(static_cast<std::int64_t>(v));
  }
  return json(v);
}

// A span s with start + s == end in floating point; differs from end - start
// by at most a few ulps.
double exact_span(double start, double end) {
  double s = end - start;
  if (start + s == end) return s;
  double up = s, down = s;
  for (int i = 0; i < 8; ++i) {
    up = std::nextafter(up, INFINITY);
    if (start + up == end) return up;
    down = std::nextafter(down, -INFINITY);
    if (start + down == end) return down;
  }
  return s;
}

void add_regions(AnnotationMap& out, const std::string& page, const json& regions) {
  std::vector<BoundingBox>& boxes = out[page];
  auto add_one = [&](const json& region) {
    if (!region.is_object()) throw ParseError("page '" + page + "': region is not an object");
    const auto shape_it = region.find("shape_attributes");
    if (shape_it == region.end() || !shape_it->is_object()) {
      throw ParseError("page '" + page + "': region lacks shape_attributes");
    }
    const json& shape = *shape_it;
    const std::string name = shape.value("name", "");
    if (name != "rect") {
      throw UnsupportedShapeError(
          "page '" + page + "': unsupported region shape '" + name + "' (only rect)", page);
    }
    const double x = number_field(shape, "x", page);
    const double y = number_field(shape, "y", page);
    const double w = number_field(shape, "width", page);
    const double h = number_field(shape, "height", page);
    if (!(w > 0) || !(h > 0)) {
      throw ParseError("page '" + page + "': rect region needs positive width and height");
    }
    boxes.push_back(BoundingBox::from_xywh(x, y, w, h));
  };
  if (regions.is_array()) {
    for (const json& r : regions) add_one(r);
  } else if (regions.is_object()) {
    // VIA 1.x keyed regions by index string.
    std::vector<std::pair<long, const json*>> ordered;
    for (auto it = regions.begin(); it != regions.end(); ++it) {
      long key = 0;
      const std::string& k = it.key();
      std::from_chars(k.data(), k.data() + k.size(), key);
      ordered.emplace_back(key, &it.value());
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [_, r] : ordered) add_one(*r);
  } else if (!regions.is_null()) {
    throw ParseError("page '" + page + "': regions must be a list");
  }
}

std::string_view trim(std::string_view s) {
  const auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && space(s.front())) s.remove_prefix(1);
  while (!s.empty() && space(s.back())) s.remove_suffix(1);
  return s;
}

void normalize_pages(std::vector<std::string>& pages) {
  std::sort(pages.begin(), pages.end());
  if (std::adjacent_find(pages.begin(), pages.end()) != pages.end()) {
    throw PreconditionError("page list contains duplicate ids");
  }
}

void shuffle(std::vector<std::string>& pages, RandomSeed seed) {
  SplitMix64 rng(seed);
  for (std::size_t i = pages.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(pages[i - 1], pages[j]);
  }
}

}  // namespace

AnnotationMap parse_via(std::string_view text) {
  const json root = parse_json(text, "VIA annotation");
  if (!root.is_object()) throw ParseError("VIA annotation: top level must be an object", 0);
  const json* images = &root;
  if (const auto it = root.find("_via_img_metadata"); it != root.end()) images = &*it;
  if (!images->is_object()) throw ParseError("VIA annotation: image metadata must be an object");

  AnnotationMap out;
  for (auto it = images->begin(); it != images->end(); ++it) {
    if (it.key().starts_with("_via_")) continue;  // settings, attributes, ...
    const json& meta = it.value();
    if (!meta.is_object()) throw ParseError("VIA annotation: entry '" + it.key() + "' is not an object");
    const std::string page = meta.value("filename", it.key());
    add_regions(out, page, meta.value("regions", json()));
  }
  return out;
}

std::string emit_via(const AnnotationMap& annotations) {
  json images = json::object();
  for (const auto& [page, boxes] : annotations) {
    json regions = json::array();
    for (const BoundingBox& b : boxes) {
      regions.push_back({{"shape_attributes",
                          {{"name", "rect"},
                           {"x", coordinate(b.x1())},
                           {"y", coordinate(b.y1())},
                           {"width", coordinate(exact_span(b.x1(), b.x2()))},
                           {"height", coordinate(exact_span(b.y1(), b.y2()))}}},
                         {"region_attributes", json::object()}});
    }
    images[page + "-1"] = {{"filename", page},
                           {"size", -1},
                           {"regions", std::move(regions)},
                           {"file_attributes", json::object()}};
  }
  json root = {{"_via_img_metadata", std::move(images)},
               {"_via_attributes", {{"region", json::object()}, {"file", json::object()}}}};
  return root.dump(1) + "\n";
}

// ---- manifest ---------------------------------------------------------------

std::string make_page_id(std::string_view doc_id, int page_index) {
  return std::string(doc_id) + "_" + std::to_string(page_index);
}

std::vector<std::string> ScanBankManifest::page_ids() const {
  std::vector<std::string> ids;
  for (const ManifestEntry& e : entries) {
    for (int i = 0; i < e.page_count; ++i) ids.push_back(make_page_id(e.doc_id, i));
  }
  return ids;
}

void ScanBankManifest::validate() const {
  std::map<std::string, int> counts;
  for (const ManifestEntry& e : entries) {
    if (e.page_count < 0) throw ValidationError("document '" + e.doc_id + "' has negative page count");
    if (!counts.emplace(e.doc_id, e.page_count).second) {
      throw ValidationError("document '" + e.doc_id + "' listed twice");
    }
  }
  for (const auto& [page, boxes] : annotations) {
    const auto sep = page.rfind('_');
    if (sep == std::string::npos) {
      throw ValidationError("page id '" + page + "' is not of the form <doc_id>_<index>");
    }
    const auto doc = counts.find(page.substr(0, sep));
    if (doc == counts.end()) throw ValidationError("page '" + page + "' names an unknown document");
    int index = -1;
    const char* first = page.data() + sep + 1;
    const char* last = page.data() + page.size();
    const auto res = std::from_chars(first, last, index);
    if (res.ec != std::errc() || res.ptr != last || index < 0 || index >= doc->second) {
      throw ValidationError("page '" + page + "' is outside its document's page range");
    }
    for (const BoundingBox& b : boxes) {
      if (b.x1() < 0 || b.y1() < 0) {
        throw ValidationError("page '" + page + "' has a box with negative coordinates");
      }
    }
  }
}

ScanBankManifest ScanBankManifest::parse(std::string_view text) {
  const json root = parse_json(text, "manifest");
  if (!root.is_object() || !root.contains("documents") || !root["documents"].is_array()) {
    throw ParseError("manifest: expected an object with a \"documents\" list", 0);
  }
  ScanBankManifest m;
  for (const json& d : root["documents"]) {
    try {
      m.entries.push_back({d.at("etd_url").get<std::string>(), d.at("doc_id").get<std::string>(),
                           d.at("page_count").get<int>()});
    } catch (const json::exception& e) {
      throw ParseError(std::string("manifest: bad document entry: ") + e.what());
    }
  }
  if (const auto it = root.find("annotations"); it != root.end()) {
    if (!it->is_object()) throw ParseError("manifest: \"annotations\" must be an object");
    for (auto a = it->begin(); a != it->end(); ++a) {
      std::vector<BoundingBox>& boxes = m.annotations[a.key()];
      if (!a.value().is_array()) throw ParseError("manifest: annotations of '" + a.key() + "' must be a list");
      for (const json& b : a.value()) {
        if (!b.is_array() || b.size() != 4 || !std::all_of(b.begin(), b.end(), [](const json& v) {
              return v.is_number();
            })) {
          throw ParseError("manifest: box on '" + a.key() + "' must be [x1, y1, x2, y2]");
        }
        try {
          boxes.emplace_back(b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                             b[3].get<double>());
        } catch (const ParameterError& e) {
          throw ValidationError("manifest: page '" + a.key() + "': " + e.what());
        }
      }
    }
  }
  m.validate();
  return m;
}

std::string ScanBankManifest::to_json() const {
  json docs = json::array();
  for (const ManifestEntry& e : entries) {
    docs.push_back({{"etd_url", e.etd_url}, {"doc_id", e.doc_id}, {"page_count", e.page_count}});
  }
  json ann = json::object();
  for (const auto& [page, boxes] : annotations) {
    json list = json::array();
    for (const BoundingBox& b : boxes) {
      list.push_back({coordinate(b.x1()), coordinate(b.y1()), coordinate(b.x2()), coordinate(b.y2())});
    }
    ann[page] = std::move(list);
  }
  return json{{"documents", std::move(docs)}, {"annotations", std::move(ann)}}.dump(1) + "\n";
}

// ---- splits -----------------------------------------------------------------

HalfSplit split_half(std::vector<std::string> pages, RandomSeed seed) {
  if (pages.size() < 2) throw PreconditionError("half split needs at least 2 pages");
  normalize_pages(pages);
  shuffle(pages, seed);
  const std::size_t first = (pages.size() + 1) / 2;
  HalfSplit out;
  out.validation.assign(pages.begin(), pages.begin() + static_cast<std::ptrdiff_t>(first));
  out.test.assign(pages.begin() + static_cast<std::ptrdiff_t>(first), pages.end());
  std::sort(out.validation.begin(), out.validation.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::vector<Fold> k_fold(std::vector<std::string> pages, int k, RandomSeed seed) {
  if (k < 2) throw PreconditionError("k-fold needs k >= 2");
  if (static_cast<std::size_t>(k) > pages.size()) {
    throw PreconditionError("k-fold needs k <= page count (k=" + std::to_string(k) +
                            ", pages=" + std::to_string(pages.size()) + ")");
  }
  normalize_pages(pages);
  shuffle(pages, seed);
  const std::size_t n = pages.size();
  const std::size_t folds = static_cast<std::size_t>(k);
  const std::size_t base = n / folds, extra = n % folds;

  std::vector<Fold> out(folds);
  std::size_t start = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
      (i >= start && i < start + size ? out[f].held_out : out[f].train).push_back(pages[i]);
    }
    start += size;
    std::sort(out[f].held_out.begin(), out[f].held_out.end());
    std::sort(out[f].train.begin(), out[f].train.end());
  }
  return out;
}

// ---- predictions ------------------------------------------------------------

PredictionFile parse_predictions(std::string_view text, const std::set<std::string>* known_pages) {
  PredictionFile out;
  std::set<std::string> warned;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool seen_record = false;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!seen_record && line.starts_with("page_id")) {
      seen_record = true;
      continue;
    }
    seen_record = true;
    const std::string where = "predictions line " + std::to_string(line_no);

    std::vector<std::string_view> fields;
    std::size_t s = 0;
    while (true) {
      const std::size_t comma = line.find(',', s);
      fields.push_back(trim(line.substr(s, comma == std::string_view::npos ? std::string_view::npos
                                                                           : comma - s)));
      if (comma == std::string_view::npos) break;
      s = comma + 1;
    }
    if (fields.size() != 6) {
      throw ValidationError(where + ": expected 6 fields, found " + std::to_string(fields.size()),
                            line_no);
    }
    double v[5];
    for (int i = 0; i < 5; ++i) {
      const std::string_view f = fields[static_cast<std::size_t>(i) + 1];
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v[i]);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size() || !std::isfinite(v[i])) {
        throw ValidationError(where + ": field " + std::to_string(i + 2) + " is not a number",
                              line_no);
      }
    }
    if (!(v[4] >= 0.0 && v[4] <= 1.0)) {
      throw ValidationError(where + ": confidence " + std::string(fields[5]) + " outside [0,1]",
                            line_no);
    }
    const std::string page(fields[0]);
    if (page.empty()) throw ValidationError(where + ": empty page id", line_no);
    Prediction p;
    try {
      p = Prediction{BoundingBox(v[0], v[1], v[2], v[3]), v[4]};
    } catch (const ParameterError& e) {
      throw ValidationError(where + ": " + e.what(), line_no);
    }
    if (known_pages && !known_pages->contains(page) && warned.insert(page).second) {
      out.warnings.push_back(where + ": page '" + page + "' has no ground truth");
    }
    out.predictions[page].push_back(p);
  }
  return out;
}

std::string emit_predictions(const PredictionSet& predictions) {
  std::string out = "page_id,x1,y1,x2,y2,confidence\n";
  char buf[32];
  auto num = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  for (const auto& [page, preds] : predictions) {
    for (const Prediction& p : preds) {
      out += page + "," + num(p.box.x1()) + "," + num(p.box.y1()) + "," + num(p.box.x2()) + "," +
             num(p.box.y2()) + "," + num(p.confidence) + "\n";
    }
  }
  return out;
}

}  // namespace scanfig
