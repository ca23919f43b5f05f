#include "xfer/datamodel/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

#include "xfer/error.hpp"
#include "xfer/numkit/byteio.hpp"

namespace xfer::datamodel {

namespace {

Domain domain_from_flag(std::uint8_t flag, const char* what) {
  if (flag > 1) {
    throw Error(ErrorCode::InvariantViolation,
                std::string(what) + " flag " + std::to_string(flag) + " is not 0 or 1");
  }
  return static_cast<Domain>(flag);
}

float to_storage(double v) {
  const auto f = static_cast<float>(v);
  if (!std::isfinite(f)) throw Error(ErrorCode::NonFinite, "feature value not representable as float32");
  return f;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view field, std::size_t line_no) {
  field = trim(field);
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::NonNumeric,
                "line " + std::to_string(line_no) + ": '" + std::string(field) + "' is not numeric");
  }
  return value;
}

}  // namespace

std::string encode_fvec(const FeatureSet& set) {
  numkit::ByteWriter w;
  w.bytes(kFvecMagic);
  w.u32(static_cast<std::uint32_t>(set.num_samples()));
  w.u32(static_cast<std::uint32_t>(set.dim()));
  w.u32(static_cast<std::uint32_t>(set.num_classes()));
  for (double v : set.features().values()) w.f32(to_storage(v));
  for (auto l : set.labels()) w.u32(l);
  for (auto d : set.domains()) w.u8(static_cast<std::uint8_t>(d));
  for (auto d : set.class_domains()) w.u8(static_cast<std::uint8_t>(d));
  return w.take();
}

FeatureSet decode_fvec(std::string_view bytes) {
  numkit::ByteReader r(bytes);
  if (bytes.size() < kFvecMagic.size() || bytes.substr(0, kFvecMagic.size()) != kFvecMagic) {
    throw Error(ErrorCode::BadMagic, "expected magic \"FVEC0001\"");
  }
  r.bytes(kFvecMagic.size(), "magic");
  const std::uint64_t n = r.u32("header N");
  const std::uint64_t d = r.u32("header d");
  const std::uint64_t c = r.u32("header C");
  const std::uint64_t payload = n * d * 4 + n * 4 + n + c;
  if (r.remaining() < payload) {
    throw Error(ErrorCode::Truncated, "header declares N=" + std::to_string(n) + ", d=" +
                                          std::to_string(d) + ", C=" + std::to_string(c) + " (" +
                                          std::to_string(payload) + " payload bytes) but only " +
                                          std::to_string(r.remaining()) + " remain");
  }
  if (r.remaining() > payload) {
    throw Error(ErrorCode::InvariantViolation,
                std::to_string(r.remaining() - payload) + " trailing bytes after payload");
  }

  Matrix features(n, d);
  for (auto& v : features.values()) v = static_cast<double>(r.f32("features"));
  std::vector<std::uint32_t> labels(n);
  for (auto& l : labels) l = r.u32("labels");
  std::vector<Domain> domains(n);
  for (auto& dm : domains) dm = domain_from_flag(r.u8("domain flags"), "domain");
  std::vector<Domain> class_domains(c);
  for (auto& dm : class_domains) dm = domain_from_flag(r.u8("class flags"), "class domain");
  return FeatureSet(std::move(features), std::move(labels), std::move(domains),
                    std::move(class_domains));
}

void save_fvec(const FeatureSet& set, const std::filesystem::path& path) {
  numkit::write_file(path, encode_fvec(set));
}

FeatureSet load_fvec(const std::filesystem::path& path) {
  return decode_fvec(numkit::read_file(path));
}

std::string format_csv(const FeatureSet& set) {
  std::string out = "label,domain";
  for (std::size_t c = 0; c < set.dim(); ++c) out += ",f" + std::to_string(c);
  out += '\n';
  char buf[64];
  for (std::size_t i = 0; i < set.num_samples(); ++i) {
    out += std::to_string(set.labels()[i]);
    out += ',';
    out += domain_name(set.domains()[i]);
    for (double v : set.features().row(i)) {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, to_storage(v));
      out += ',';
      out.append(buf, ptr);
    }
    out += '\n';
  }
  return out;
}

FeatureSet parse_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = trim(text.substr(start, nl - start));
    if (!line.empty()) lines.push_back(line);
    start = nl + 1;
  }
  if (lines.empty()) throw Error(ErrorCode::BadHeader, "empty CSV");

  const auto header = split_fields(lines[0]);
  if (header.size() < 3 || trim(header[0]) != "label" || trim(header[1]) != "domain") {
    throw Error(ErrorCode::BadHeader, "header must be label,domain,f0,...,f{d-1}");
  }
  const std::size_t d = header.size() - 2;
  for (std::size_t c = 0; c < d; ++c) {
    if (trim(header[c + 2]) != "f" + std::to_string(c)) {
      throw Error(ErrorCode::BadHeader, "column " + std::to_string(c + 2) + " must be f" +
                                            std::to_string(c));
    }
  }

  const std::size_t n = lines.size() - 1;
  Matrix features(n, d);
  std::vector<std::uint32_t> labels(n);
  std::vector<Domain> domains(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t line_no = i + 2;
    const auto fields = split_fields(lines[i + 1]);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::RaggedRow, "line " + std::to_string(line_no) + " has " +
                                            std::to_string(fields.size()) + " fields, expected " +
                                            std::to_string(header.size()));
    }
    labels[i] = parse_number<std::uint32_t>(fields[0], line_no);
    const auto dom = trim(fields[1]);
    if (dom == "pre") {
      domains[i] = Domain::Pre;
    } else if (dom == "eval") {
      domains[i] = Domain::Eval;
    } else {
      throw Error(ErrorCode::UnknownDomain,
                  "line " + std::to_string(line_no) + ": domain '" + std::string(dom) + "'");
    }
    for (std::size_t c = 0; c < d; ++c) features(i, c) = parse_number<double>(fields[c + 2], line_no);
  }

  std::uint32_t max_label = 0;
  for (auto l : labels) max_label = std::max(max_label, l);
  std::vector<Domain> class_domains(std::size_t{max_label} + 1, Domain::Pre);
  std::vector<bool> seen(class_domains.size(), false);
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[labels[i]]) {
      seen[labels[i]] = true;
      class_domains[labels[i]] = domains[i];
    } else if (class_domains[labels[i]] != domains[i]) {
      throw Error(ErrorCode::InvariantViolation,
                  "class " + std::to_string(labels[i]) + " appears in both domains");
    }
  }
  return FeatureSet(std::move(features), std::move(labels), std::move(domains),
                    std::move(class_domains));
}

void save_csv(const FeatureSet& set, const std::filesystem::path& path) {
  numkit::write_file(path, format_csv(set));
}

FeatureSet load_csv(const std::filesystem::path& path) { return parse_csv(numkit::read_file(path)); }

FeatureSet load_feature_set(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? load_csv(path) : load_fvec(path);
}

}  // namespace xfer::datamodel
