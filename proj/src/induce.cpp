#include "scanfig/induce.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include "latex_text.hpp"
#include "scanfig/error.hpp"
#include "scanfig/image_io.hpp"
#include "scanfig/kernels.hpp"

namespace scanfig {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kMarkupMarker = "% scanfig:frame-floats";

// Wraps the body of every float (single and double column) in a zero-padding
// \fbox so the only visual change is the frame around the float's contents.
constexpr std::string_view kMarkupBody = R"(\makeatletter
\newsavebox\scanfig@floatbox
\let\scanfig@float@orig\@float
\let\scanfig@endfloat@orig\end@float
\let\scanfig@dblfloat@orig\@dblfloat
\let\scanfig@enddblfloat@orig\end@dblfloat
\def\scanfig@open{\begin{lrbox}{\scanfig@floatbox}\begin{minipage}{\linewidth}}
\def\scanfig@close{\end{minipage}\end{lrbox}{\setlength{\fboxsep}{0pt}\setlength{\fboxrule}{1.44pt}\noindent\fbox{\usebox\scanfig@floatbox}}}
\def\@float#1{\@ifnextchar[{\scanfig@float{#1}}{\scanfig@float{#1}[\csname fps@#1\endcsname]}}
\def\scanfig@float#1[#2]{\scanfig@float@orig{#1}[#2]\scanfig@open}
\def\end@float{\scanfig@close\scanfig@endfloat@orig}
\def\@dblfloat#1{\@ifnextchar[{\scanfig@dblfloat{#1}}{\scanfig@dblfloat{#1}[\csname fps@#1\endcsname]}}
\def\scanfig@dblfloat#1[#2]{\scanfig@dblfloat@orig{#1}[#2]\scanfig@open}
\def\end@dblfloat{\scanfig@close\scanfig@enddblfloat@orig}
\makeatother
)";

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

std::string expand_template(std::string tmpl, const std::vector<std::pair<std::string, std::string>>& vars) {
  for (const auto& [key, value] : vars) {
    const std::string needle = "{" + key + "}";
    for (std::size_t pos = tmpl.find(needle); pos != std::string::npos;
         pos = tmpl.find(needle, pos + value.size())) {
      tmpl.replace(pos, needle.size(), value);
    }
  }
  return tmpl;
}

// Trailing number of a file stem ("page-07" -> 7); files without one sort first.
long trailing_number(const fs::path& p) {
  const std::string stem = p.stem().string();
  std::size_t i = stem.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(stem[i - 1]))) --i;
  if (i == stem.size()) return -1;
  return std::stol(stem.substr(i));
}

class ProcessLimiter {
 public:
  void acquire(std::size_t limit) {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return active_ < std::max<std::size_t>(limit, 1); });
    ++active_;
  }
  void release() {
    {
      std::lock_guard lock(mutex_);
      --active_;
    }
    cv_.notify_all();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::size_t active_ = 0;
};

ProcessLimiter& limiter() {
  static ProcessLimiter instance;
  return instance;
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "scanfig-render-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw IoError("cannot create temporary directory");
    path = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string inject_box_markup(std::string_view source) {
  if (latex::find_control_word(source, "\\documentclass").empty()) {
    throw ParseError("no preamble: \\documentclass not found");
  }
  const std::size_t begin = latex::find_begin_document(source);
  if (begin == std::string_view::npos) throw ParseError("no preamble: \\begin{document} not found");
  if (source.substr(0, begin).find(kMarkupMarker) != std::string_view::npos) {
    return std::string(source);
  }
  std::string out(source);
  out.insert(begin, std::string(kMarkupMarker) + "\n" + std::string(kMarkupBody));
  return out;
}

RendererConfig RendererConfig::from_environment(RendererConfig fallback) {
  if (const char* env = std::getenv(kEnvOverride); env && *env) fallback.command_template = env;
  return fallback;
}

RenderedDocument render(std::string_view source, int dpi, const RendererConfig& cfg,
                        std::string doc_id) {
  if (dpi <= 0) throw ParameterError("dpi must be positive");
  TempDir work;
  // The stem lands unquoted in the command; keep it shell-inert.
  std::string stem = doc_id.empty() ? "document" : doc_id;
  for (char& c : stem) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') c = '_';
  }
  const fs::path input = work.path / (stem + ".tex");
  const fs::path outdir = work.path / "pages";
  fs::create_directories(outdir);
  {
    std::ofstream out(input, std::ios::binary);
    out << source;
    if (!out) throw IoError("cannot write " + input.string());
  }
  const std::string command = expand_template(
      cfg.command_template, {{"input", shell_quote(input.string())},
                             {"stem", stem},
                             {"workdir", shell_quote(work.path.string())},
                             {"outdir", shell_quote(outdir.string())},
                             {"dpi", std::to_string(dpi)}});
  const fs::path log = work.path / "render.log";
  const std::string wrapped = "cd " + shell_quote(work.path.string()) + " && ( " + command +
                              " ) > " + shell_quote(log.string()) + " 2>&1 < /dev/null";
  limiter().acquire(cfg.max_concurrent);
  const int status = std::system(wrapped.c_str());
  limiter().release();

  if (status == -1) throw RendererError("cannot start shell for renderer");
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : 128;
  if (code == 127) {
    throw RendererMissingError("renderer command not found", read_file(log));
  }
  if (code != 0) {
    throw RendererError("renderer exited with status " + std::to_string(code), read_file(log));
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(outdir)) {
    if (entry.path().extension() == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    const long na = trailing_number(a), nb = trailing_number(b);
    return na != nb ? na < nb : a.filename() < b.filename();
  });
  if (files.empty()) throw RendererError("renderer produced no page images", read_file(log));

  RenderedDocument doc{std::move(doc_id), dpi, {}};
  doc.pages.reserve(files.size());
  for (const fs::path& f : files) doc.pages.push_back(read_png(f));
  return doc;
}

std::vector<DiffRegion> diff_pages(const PageImage& plain, const PageImage& marked,
                                   const DiffOptions& opts) {
  if (plain.width() != marked.width() || plain.height() != marked.height() ||
      plain.channels() != marked.channels()) {
    throw ParameterError("diff_pages: page images differ in dimensions");
  }
  const int w = plain.width(), h = plain.height();
  const std::size_t n = plain.pixel_count();
  const auto ch = static_cast<std::size_t>(plain.channels());

  std::vector<std::uint8_t> channel_mask(n * ch);
  kernels::absdiff_mask(plain.pixels(), marked.pixels(), channel_mask, opts.threshold);
  std::vector<std::uint8_t> mask(n, 0);
  if (ch == 1) {
    mask = std::move(channel_mask);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < ch; ++c) mask[i] |= channel_mask[i * ch + c];
    }
  }

  std::vector<DiffRegion> regions;
  std::vector<PixelCoord> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t seed = static_cast<std::size_t>(y) * w + x;
      if (mask[seed] != 1) continue;
      mask[seed] = 2;
      DiffRegion region;
      int x1 = x, x2 = x, y1 = y, y2 = y;
      stack.assign(1, PixelCoord{x, y});
      while (!stack.empty()) {
        const PixelCoord p = stack.back();
        stack.pop_back();
        region.pixels.push_back(p);
        x1 = std::min(x1, p.x), x2 = std::max(x2, p.x);
        y1 = std::min(y1, p.y), y2 = std::max(y2, p.y);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = p.x + dx, ny = p.y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
            if (mask[ni] != 1) continue;
            mask[ni] = 2;
            stack.push_back({nx, ny});
          }
        }
      }
      if (region.pixels.size() < opts.min_region_px) continue;
      region.envelope = BoundingBox(x1, y1, x2 + 1, y2 + 1);
      regions.push_back(std::move(region));
    }
  }
  return regions;
}

std::vector<BoundingBox> regions_to_labels(const std::vector<DiffRegion>& regions,
                                           double stroke_px, double merge_overlap) {
  if (!(stroke_px >= 0)) throw ParameterError("stroke width must be >= 0");
  std::vector<BoundingBox> boxes;
  boxes.reserve(regions.size());
  for (const DiffRegion& r : regions) boxes.push_back(r.envelope);

  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < boxes.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < boxes.size(); ++j) {
        const double smaller = std::min(boxes[i].area(), boxes[j].area());
        if (intersection_area(boxes[i], boxes[j]) > merge_overlap * smaller) {
          boxes[i] = boxes[i].united(boxes[j]);
          boxes.erase(boxes.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
          break;
        }
      }
    }
  }
  for (BoundingBox& b : boxes) b = b.inset(stroke_px);
  std::sort(boxes.begin(), boxes.end(), [](const BoundingBox& a, const BoundingBox& b) {
    return a.y1() != b.y1() ? a.y1() < b.y1() : a.x1() < b.x1();
  });
  return boxes;
}

std::vector<std::vector<BoundingBox>> induce_labels(const RenderedDocument& plain,
                                                    const RenderedDocument& marked,
                                                    const InductionOptions& opts) {
  if (plain.pages.size() != marked.pages.size()) {
    throw InductionAbortError("markup changed pagination: " + std::to_string(plain.pages.size()) +
                              " vs " + std::to_string(marked.pages.size()) + " pages");
  }
  std::vector<std::vector<BoundingBox>> labels;
  labels.reserve(plain.pages.size());
  for (std::size_t i = 0; i < plain.pages.size(); ++i) {
    const PageImage& a = plain.pages[i];
    const PageImage& b = marked.pages[i];
    if (a.width() != b.width() || a.height() != b.height() || a.channels() != b.channels()) {
      throw InductionAbortError("page " + std::to_string(i) + " differs in size between renders");
    }
    labels.push_back(
        regions_to_labels(diff_pages(a, b, opts.diff), opts.stroke_px, opts.merge_overlap));
  }
  return labels;
}

}  // namespace scanfig
