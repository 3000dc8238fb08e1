#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>
#include <pybind11/operators.h>

#include <sstream>

#include "smsxfer/channel_sim.hpp"
#include "smsxfer/cli.hpp"
#include "smsxfer/image_metrics.hpp"
#include "smsxfer/inbox_store.hpp"
#include "smsxfer/segmentation.hpp"
#include "smsxfer/transcode.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace smsxfer;

namespace {

/// Python ints are unbounded; anything outside the alphabet is a
/// RangeViolation rather than a silent narrowing.
CodePointText text_from(const std::vector<long long>& values) {
  std::vector<CodePoint> points;
  points.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0 || !is_valid_code_point(static_cast<unsigned long>(values[i]))) {
      throw RangeViolation(i, static_cast<unsigned long>(values[i]));
    }
    points.push_back(static_cast<CodePoint>(values[i]));
  }
  return CodePointText::from_points(std::move(points));
}

std::vector<CodePoint> list_of(const CodePointText& text) { return {text.begin(), text.end()}; }

std::vector<CodePointText> texts_from(const std::vector<std::vector<long long>>& messages) {
  std::vector<CodePointText> out;
  out.reserve(messages.size());
  for (const auto& m : messages) out.push_back(text_from(m));
  return out;
}

ByteStream bytes_from(const py::bytes& data) {
  const std::string_view view = data;
  return ByteStream(view.begin(), view.end());
}

py::bytes to_py(const ByteStream& bytes) {
  return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "C++ core of smsxfer: transcoding, segmentation, inbox store, channel simulator";

  // Base first: pybind11 tries the most recently registered translator first.
  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<RangeViolation>(m, "RangeViolation", error);
  py::register_exception<MalformedText>(m, "MalformedText", error);
  py::register_exception<TooManySegments>(m, "TooManySegments", error);
  py::register_exception<MalformedHeader>(m, "MalformedHeader", error);
  py::register_exception<UnexpectedSegment>(m, "UnexpectedSegment", error);
  py::register_exception<ConflictingDuplicate>(m, "ConflictingDuplicate", error);
  py::register_exception<StorageFailure>(m, "StorageFailure", error);
  py::register_exception<OversizeMessage>(m, "OversizeMessage", error);
  py::register_exception<MalformedPpm>(m, "MalformedPpm", error);

  // MissingSegments carries the absent indices as `.missing`.
  static py::handle missing_type =
      py::exception<MissingSegments>(m, "MissingSegments", error).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const MissingSegments& e) {
      py::object instance = py::reinterpret_borrow<py::object>(missing_type)(e.what());
      instance.attr("missing") = py::cast(e.missing());
      PyErr_SetObject(missing_type.ptr(), instance.ptr());
    }
  });

  m.def(
      "encode_bytes", [](const py::bytes& data) { return list_of(encode_bytes(bytes_from(data))); },
      py::arg("data"), "Bytes to code points; 0-31 become 256-287.");
  m.def(
      "decode_text",
      [](const std::vector<long long>& points) { return to_py(decode_text(text_from(points))); },
      py::arg("points"), "Inverse of encode_bytes; raises RangeViolation.");
  m.def(
      "to_utf8", [](const std::vector<long long>& points) { return py::bytes(to_utf8(text_from(points))); },
      py::arg("points"));
  m.def(
      "from_utf8", [](const py::bytes& data) { return list_of(from_utf8(std::string(data))); },
      py::arg("data"));

  py::class_<Segment>(m, "Segment")
      .def(py::init([](std::size_t index, const std::vector<long long>& body) {
             return Segment(index, text_from(body));
           }),
           py::arg("index"), py::arg("body") = std::vector<long long>{})
      .def_readonly("index", &Segment::index)
      .def_property_readonly("body", [](const Segment& s) { return list_of(s.body); })
      .def(py::self == py::self)
      .def("__repr__", [](const Segment& s) {
        return "Segment(index=" + std::to_string(s.index) + ", body=<" +
               std::to_string(s.body.size()) + " points>)";
      });

  m.def(
      "segment_count",
      [](std::size_t n, std::size_t capacity) { return segment_count(n, SegmentPlan(capacity)); },
      py::arg("payload_points"), py::arg("capacity") = kDefaultCapacityPoints);
  m.def(
      "split",
      [](const std::vector<long long>& payload, std::size_t capacity) {
        return split(text_from(payload), SegmentPlan(capacity));
      },
      py::arg("payload"), py::arg("capacity") = kDefaultCapacityPoints,
      "Indexed segments of at most `capacity` points each, header included.");
  m.def(
      "render", [](const Segment& s) { return list_of(render(s)); }, py::arg("segment"));
  m.def(
      "parse", [](const std::vector<long long>& rendered) { return parse(text_from(rendered)); },
      py::arg("rendered"));
  m.def(
      "reassemble",
      [](const std::vector<Segment>& segments, std::optional<std::size_t> expected_count) {
        return list_of(reassemble(segments, expected_count));
      },
      py::arg("segments"), py::arg("expected_count") = py::none());
  m.def(
      "write_segments_file",
      [](const std::vector<std::vector<long long>>& messages, std::optional<std::size_t> count) {
        return py::bytes(write_segments_file(texts_from(messages), count));
      },
      py::arg("messages"), py::arg("count") = py::none());
  m.def(
      "read_segments_file",
      [](const py::bytes& contents) {
        const auto file = read_segments_file(std::string(contents));
        py::list lines;
        for (const auto& l : file.lines) lines.append(py::bytes(l));
        return py::make_tuple(file.count, lines);
      },
      py::arg("contents"), "Returns (count or None, [line bytes]).");

  py::class_<ChannelProfile>(m, "ChannelProfile")
      .def(py::init([](std::size_t capacity, std::size_t reorder_window, double duplicate_prob,
                       double loss_prob, std::uint64_t seed) {
             ChannelProfile p{capacity, reorder_window, duplicate_prob, loss_prob, seed};
             p.validate();
             return p;
           }),
           py::kw_only(), py::arg("capacity") = kDefaultCapacityPoints,
           py::arg("reorder_window") = 0, py::arg("duplicate_prob") = 0.0,
           py::arg("loss_prob") = 0.0, py::arg("seed") = 0)
      .def_readonly("capacity", &ChannelProfile::capacity_points)
      .def_readonly("reorder_window", &ChannelProfile::reorder_window)
      .def_readonly("duplicate_prob", &ChannelProfile::duplicate_prob)
      .def_readonly("loss_prob", &ChannelProfile::loss_prob)
      .def_readonly("seed", &ChannelProfile::seed);

  m.def(
      "transmit",
      [](const std::vector<std::vector<long long>>& messages, const ChannelProfile& profile) {
        std::vector<std::vector<CodePoint>> out;
        for (const auto& d : transmit(texts_from(messages), profile)) out.push_back(list_of(d));
        return out;
      },
      py::arg("messages"), py::arg("profile"));
  m.def(
      "transmit_trace",
      [](const std::vector<std::vector<long long>>& messages, const ChannelProfile& profile) {
        std::vector<std::pair<std::size_t, std::vector<CodePoint>>> out;
        for (const auto& d : transmit_trace(texts_from(messages), profile)) {
          out.emplace_back(d.source, list_of(d.message));
        }
        return out;
      },
      py::arg("messages"), py::arg("profile"), "List of (send position, message) in arrival order.");

  py::class_<InboxStore>(m, "InboxStore")
      .def(py::init([](const std::filesystem::path& directory, bool sync_writes) {
             return InboxStore(directory, StoreOptions{sync_writes});
           }),
           py::arg("directory"), py::arg("sync_writes") = true)
      .def_property_readonly("directory", &InboxStore::directory)
      .def("put_record", &InboxStore::put_record, py::arg("transfer_id"), py::arg("segment"))
      .def(
          "list_records",
          [](InboxStore& store, const std::string& id) {
            py::list out;
            for (const auto& r : store.list_records(id)) {
              out.append(py::make_tuple(r.index, to_py(r.body_bytes)));
            }
            return out;
          },
          py::arg("transfer_id"), "List of (index, record bytes) in index order.")
      .def(
          "reconstruct",
          [](InboxStore& store, const std::string& id, std::optional<std::size_t> expected) {
            return to_py(store.reconstruct(id, expected));
          },
          py::arg("transfer_id"), py::arg("expected_count") = py::none())
      .def("transfer_ids", &InboxStore::transfer_ids);

  py::class_<RgbImage>(m, "RgbImage")
      .def(py::init([](std::size_t width, std::size_t height, const py::bytes& rgb) {
             return RgbImage(width, height, bytes_from(rgb));
           }),
           py::arg("width"), py::arg("height"), py::arg("rgb"))
      .def_property_readonly("width", &RgbImage::width)
      .def_property_readonly("height", &RgbImage::height)
      .def_property_readonly("rgb", [](const RgbImage& img) {
        return py::bytes(reinterpret_cast<const char*>(img.rgb().data()), img.rgb().size());
      });

  m.def(
      "parse_ppm", [](const py::bytes& data) { return parse_ppm(bytes_from(data)); },
      py::arg("data"));
  m.def(
      "write_ppm", [](const RgbImage& image) { return to_py(write_ppm(image)); }, py::arg("image"));
  m.def("unique_colors", &unique_colors, py::arg("image"));

  py::class_<TransferStats>(m, "TransferStats")
      .def_readonly("characters", &TransferStats::characters)
      .def_readonly("messages", &TransferStats::messages)
      .def_readonly("unique_colors", &TransferStats::unique_colors)
      .def("__repr__", [](const TransferStats& s) { return "TransferStats(" + format_stats_csv(s) + ")"; });

  m.def(
      "transfer_stats",
      [](const py::bytes& payload, std::size_t capacity, const RgbImage* image) {
        return transfer_stats(bytes_from(payload), SegmentPlan(capacity), image);
      },
      py::arg("payload"), py::arg("capacity") = kDefaultCapacityPoints,
      py::arg("image") = nullptr);
  m.def("format_stats_csv", &format_stats_csv, py::arg("stats"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the smsxfer CLI in-process; returns (exit code, stdout, stderr).");

  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
}
