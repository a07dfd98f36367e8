#include "nauticle/io/vtk.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nauticle/case.hpp"
#include "nauticle/error.hpp"
#include "nauticle/format.hpp"

namespace nauticle {

namespace {

double to_big_endian(double v) {
    if constexpr (std::endian::native == std::endian::little) {
        auto u = std::bit_cast<std::uint64_t>(v);
        return std::bit_cast<double>(__builtin_bswap64(u));
    }
    return v;
}

std::int32_t to_big_endian(std::int32_t v) {
    if constexpr (std::endian::native == std::endian::little)
        return static_cast<std::int32_t>(__builtin_bswap32(static_cast<std::uint32_t>(v)));
    return v;
}

class VtkWriter {
public:
    VtkWriter(std::ofstream& out, bool binary) : out_(out), binary_(binary) {}

    void doubles(const std::vector<double>& values, int per_line) {
        if (binary_) {
            std::vector<double> be(values.size());
            for (size_t k = 0; k < values.size(); ++k) be[k] = to_big_endian(values[k]);
            out_.write(reinterpret_cast<const char*>(be.data()),
                       static_cast<std::streamsize>(be.size() * sizeof(double)));
            out_ << '\n';
            return;
        }
        for (size_t k = 0; k < values.size(); ++k) {
            out_ << format_double(values[k]);
            out_ << (((k + 1) % per_line == 0) ? '\n' : ' ');
        }
        if (values.size() % per_line != 0) out_ << '\n';
    }

    void ints(const std::vector<std::int32_t>& values, int per_line) {
        if (binary_) {
            std::vector<std::int32_t> be(values.size());
            for (size_t k = 0; k < values.size(); ++k) be[k] = to_big_endian(values[k]);
            out_.write(reinterpret_cast<const char*>(be.data()),
                       static_cast<std::streamsize>(be.size() * sizeof(std::int32_t)));
            out_ << '\n';
            return;
        }
        for (size_t k = 0; k < values.size(); ++k) {
            out_ << values[k];
            out_ << (((k + 1) % per_line == 0) ? '\n' : ' ');
        }
        if (values.size() % per_line != 0) out_ << '\n';
    }

    void numeric_field_array(const std::string& name, int comps, long tuples,
                             const std::vector<double>& data) {
        out_ << name << ' ' << comps << ' ' << tuples << " double\n";
        doubles(data, comps);
    }

    // String arrays are written as one ASCII line per tuple in both modes;
    // the entries themselves never contain whitespace.
    void string_field_array(const std::string& name, const std::vector<std::string>& items) {
        out_ << name << " 1 " << items.size() << " string\n";
        for (const auto& s : items) out_ << s << '\n';
    }

private:
    std::ofstream& out_;
    bool binary_;
};

std::vector<double> padded3(const std::vector<Tensor>& tensors) {
    std::vector<double> flat;
    flat.reserve(tensors.size() * 3);
    for (const auto& t : tensors)
        for (int a = 0; a < 3; ++a) flat.push_back(a < t.rows() ? t(a) : 0.0);
    return flat;
}

struct RawArray {
    std::string name;
    int comps = 1;
    long tuples = 0;
    bool is_string = false;
    std::vector<double> data;
    std::vector<std::string> strings;
};

class VtkScanner {
public:
    explicit VtkScanner(std::string buf, std::string path)
        : buf_(std::move(buf)), path_(std::move(path)) {}

    bool eof() {
        skip_ws_peek();
        return pos_ >= buf_.size();
    }

    std::string next_line() {
        size_t end = buf_.find('\n', pos_);
        std::string line =
            end == std::string::npos ? buf_.substr(pos_) : buf_.substr(pos_, end - pos_);
        pos_ = end == std::string::npos ? buf_.size() : end + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    }

    std::string next_nonempty_line() {
        while (pos_ < buf_.size()) {
            std::string line = next_line();
            if (!line.empty()) return line;
        }
        throw io_error("unexpected end of VTK file '", path_, "'");
    }

    std::string next_word() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < buf_.size() && !std::isspace(static_cast<unsigned char>(buf_[pos_]))) ++pos_;
        if (start == pos_) throw io_error("unexpected end of VTK file '", path_, "'");
        return buf_.substr(start, pos_ - start);
    }

    double next_double() {
        std::string w = next_word();
        bool ok = true;
        double v = parse_double(w, ok);
        if (!ok) throw io_error("VTK file '", path_, "': expected a number, got '", w, "'");
        return v;
    }

    std::vector<double> numbers(long count, bool binary) {
        std::vector<double> out(count);
        if (binary) {
            if (pos_ + count * sizeof(double) > buf_.size())
                throw io_error("VTK file '", path_, "': truncated binary block");
            for (long k = 0; k < count; ++k) {
                double v;
                std::memcpy(&v, buf_.data() + pos_, sizeof(double));
                out[k] = to_big_endian(v);  // involution
                pos_ += sizeof(double);
            }
            if (pos_ < buf_.size() && buf_[pos_] == '\n') ++pos_;
        } else {
            for (long k = 0; k < count; ++k) out[k] = next_double();
        }
        return out;
    }

    void skip_ints(long count, bool binary) {
        if (binary) {
            pos_ += count * sizeof(std::int32_t);
            if (pos_ > buf_.size()) throw io_error("VTK file '", path_, "': truncated binary block");
            if (pos_ < buf_.size() && buf_[pos_] == '\n') ++pos_;
        } else {
            for (long k = 0; k < count; ++k) next_word();
        }
    }

private:
    void skip_ws() {
        while (pos_ < buf_.size() && std::isspace(static_cast<unsigned char>(buf_[pos_]))) ++pos_;
    }
    void skip_ws_peek() { skip_ws(); }

    std::string buf_;
    std::string path_;
    size_t pos_ = 0;
};

std::vector<std::string> split_words(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> words;
    std::string w;
    while (ss >> w) words.push_back(w);
    return words;
}

}  // namespace

ResultFrame make_frame(const Case& cs, int frame_index, double time) {
    ResultFrame f;
    f.frame_index = frame_index;
    f.time = time;
    const ParticleSystem& ps = cs.particle_system();
    f.dimension = ps.domain().dimension();
    f.positions = ps.positions().values;
    for (const auto& field : cs.workspace.fields()) {
        if (field->name == "r") continue;
        f.fields.push_back({field->name, field->values});
    }
    for (const auto& v : cs.workspace.variables()) f.variables.emplace_back(v->name, v->value);
    for (const auto& c : cs.workspace.constants()) f.constants.emplace_back(c->name, c->value);
    for (const auto& eq : cs.equations) f.equations_text.push_back(eq.to_text());
    f.domain_text = ps.domain().describe();
    f.params_text = "simulated_time=" + format_double(cs.parameters.simulated_time);
    if (cs.parameters.has_print_interval)
        f.params_text += ";print_interval=" + format_double(cs.parameters.print_interval);
    for (std::uint64_t c : cs.random.counters())
        if (c != 0) {
            f.rand_counters = cs.random.counters();
            break;
        }
    return f;
}

void write_vtk(const ResultFrame& frame, const std::string& path, VtkFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write result file '", path, "'");
    const bool binary = format == VtkFormat::Binary;
    VtkWriter w(out, binary);
    const long n = static_cast<long>(frame.positions.size());

    out << "# vtk DataFile Version 3.0\n";
    out << "nauticle result frame\n";
    out << (binary ? "BINARY" : "ASCII") << '\n';
    out << "DATASET POLYDATA\n";

    // Case metadata as dataset field data.
    std::vector<std::string> shapes;
    for (const auto& fd : frame.fields)
        if (!fd.values.empty() && !fd.values[0].is_scalar())
            shapes.push_back(fd.name + "=" + std::to_string(fd.values[0].rows()) + "x" +
                             std::to_string(fd.values[0].cols()));
    std::vector<std::string> vars, consts;
    for (const auto& [name, value] : frame.variables) vars.push_back(name + "=" + to_string(value));
    for (const auto& [name, value] : frame.constants)
        consts.push_back(name + "=" + to_string(value));

    int arrays = 5;  // frame, time, dimension, domain, params
    if (!shapes.empty()) ++arrays;
    if (!vars.empty()) ++arrays;
    if (!consts.empty()) ++arrays;
    if (!frame.equations_text.empty()) ++arrays;
    if (!frame.rand_counters.empty()) ++arrays;

    out << "FIELD CaseData " << arrays << '\n';
    w.numeric_field_array("frame", 1, 1, {static_cast<double>(frame.frame_index)});
    w.numeric_field_array("time", 1, 1, {frame.time});
    w.numeric_field_array("dimension", 1, 1, {static_cast<double>(frame.dimension)});
    w.string_field_array("domain", {frame.domain_text});
    w.string_field_array("params", {frame.params_text});
    if (!shapes.empty()) w.string_field_array("field_shapes", shapes);
    if (!vars.empty()) w.string_field_array("variables", vars);
    if (!consts.empty()) w.string_field_array("constants", consts);
    if (!frame.equations_text.empty()) w.string_field_array("equations", frame.equations_text);
    if (!frame.rand_counters.empty()) {
        std::vector<double> counters(frame.rand_counters.begin(), frame.rand_counters.end());
        w.numeric_field_array("rand_counters", 1, static_cast<long>(counters.size()), counters);
    }

    out << "POINTS " << n << " double\n";
    w.doubles(padded3(frame.positions), 3);

    out << "VERTICES " << n << ' ' << 2 * n << '\n';
    std::vector<std::int32_t> cells;
    cells.reserve(2 * n);
    for (long i = 0; i < n; ++i) {
        cells.push_back(1);
        cells.push_back(static_cast<std::int32_t>(i));
    }
    w.ints(cells, 2);

    out << "POINT_DATA " << n << '\n';
    std::vector<const ResultFrame::FieldValues*> matrix_fields;
    for (const auto& fd : frame.fields) {
        if (fd.values.empty()) continue;
        const Tensor& head = fd.values[0];
        if (head.is_scalar()) {
            out << "SCALARS " << fd.name << " double 1\n";
            out << "LOOKUP_TABLE default\n";
            std::vector<double> flat;
            flat.reserve(fd.values.size());
            for (const auto& t : fd.values) flat.push_back(t(0, 0));
            w.doubles(flat, 1);
        } else if (head.is_column()) {
            out << "VECTORS " << fd.name << " double\n";
            w.doubles(padded3(fd.values), 3);
        } else {
            matrix_fields.push_back(&fd);
        }
    }
    if (!matrix_fields.empty()) {
        out << "FIELD PerParticle " << matrix_fields.size() << '\n';
        for (const auto* fd : matrix_fields) {
            const int comps = fd->values[0].rows() * fd->values[0].cols();
            std::vector<double> flat;
            flat.reserve(fd->values.size() * comps);
            for (const auto& t : fd->values)
                for (int r = 0; r < t.rows(); ++r)
                    for (int c = 0; c < t.cols(); ++c) flat.push_back(t(r, c));
            w.numeric_field_array(fd->name, comps, static_cast<long>(fd->values.size()), flat);
        }
    }
    if (!out) throw io_error("failed while writing result file '", path, "'");
}

ResultFrame read_vtk(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open result file '", path, "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    VtkScanner sc(ss.str(), path);

    std::string magic = sc.next_line();
    if (magic.rfind("# vtk DataFile", 0) != 0)
        throw io_error("'", path, "' is not a legacy VTK file");
    sc.next_line();  // title
    std::string fmt = sc.next_nonempty_line();
    bool binary = fmt == "BINARY";
    if (!binary && fmt != "ASCII")
        throw io_error("'", path, "': unknown VTK data format '", fmt, "'");
    std::string dataset = sc.next_nonempty_line();
    if (split_words(dataset) != std::vector<std::string>{"DATASET", "POLYDATA"})
        throw io_error("'", path, "': expected DATASET POLYDATA, got '", dataset, "'");

    std::vector<RawArray> case_data;
    std::vector<RawArray> point_arrays;  // in file order
    std::vector<double> points;
    long n_points = 0;

    auto read_field_block = [&](long count, std::vector<RawArray>& into) {
        for (long k = 0; k < count; ++k) {
            auto header = split_words(sc.next_nonempty_line());
            if (header.size() != 4)
                throw io_error("'", path, "': malformed FIELD array header");
            RawArray arr;
            arr.name = header[0];
            arr.comps = std::stoi(header[1]);
            arr.tuples = std::stol(header[2]);
            if (header[3] == "string") {
                arr.is_string = true;
                for (long t = 0; t < arr.tuples; ++t) arr.strings.push_back(sc.next_line());
            } else {
                arr.data = sc.numbers(arr.comps * arr.tuples, binary);
            }
            into.push_back(std::move(arr));
        }
    };

    bool in_point_data = false;
    while (!sc.eof()) {
        auto words = split_words(sc.next_nonempty_line());
        if (words.empty()) continue;
        const std::string& key = words[0];
        if (key == "FIELD") {
            long count = std::stol(words[2]);
            read_field_block(count, in_point_data ? point_arrays : case_data);
        } else if (key == "POINTS") {
            n_points = std::stol(words[1]);
            points = sc.numbers(n_points * 3, binary);
        } else if (key == "VERTICES") {
            sc.skip_ints(std::stol(words[2]), binary);
        } else if (key == "POINT_DATA") {
            in_point_data = true;
            if (std::stol(words[1]) != n_points)
                throw io_error("'", path, "': POINT_DATA count mismatch");
        } else if (key == "SCALARS") {
            std::string lut = sc.next_nonempty_line();
            if (lut.rfind("LOOKUP_TABLE", 0) != 0)
                throw io_error("'", path, "': SCALARS without LOOKUP_TABLE");
            RawArray arr;
            arr.name = words[1];
            arr.comps = 1;
            arr.tuples = n_points;
            arr.data = sc.numbers(n_points, binary);
            point_arrays.push_back(std::move(arr));
        } else if (key == "VECTORS") {
            RawArray arr;
            arr.name = words[1];
            arr.comps = 3;
            arr.tuples = n_points;
            arr.data = sc.numbers(n_points * 3, binary);
            point_arrays.push_back(std::move(arr));
        } else {
            throw io_error("'", path, "': unsupported VTK section '", key, "'");
        }
    }

    auto find_case = [&](const std::string& name) -> const RawArray* {
        for (const auto& a : case_data)
            if (a.name == name) return &a;
        return nullptr;
    };

    ResultFrame f;
    const RawArray* dim = find_case("dimension");
    const RawArray* time = find_case("time");
    const RawArray* fidx = find_case("frame");
    if (!dim || !time || !fidx)
        throw io_error("'", path, "' lacks the CaseData block of a result frame");
    f.dimension = static_cast<int>(dim->data.at(0));
    f.time = time->data.at(0);
    f.frame_index = static_cast<int>(fidx->data.at(0));
    if (const RawArray* d = find_case("domain")) f.domain_text = d->strings.at(0);
    if (const RawArray* p = find_case("params")) f.params_text = p->strings.at(0);
    if (const RawArray* e = find_case("equations")) f.equations_text = e->strings;
    if (const RawArray* rc = find_case("rand_counters"))
        f.rand_counters.assign(rc->data.begin(), rc->data.end());
    if (const RawArray* v = find_case("variables"))
        for (const auto& s : v->strings) {
            size_t eq = s.find('=');
            if (eq == std::string::npos) throw io_error("'", path, "': malformed variable '", s, "'");
            f.variables.emplace_back(s.substr(0, eq), parse_tensor(s.substr(eq + 1)));
        }
    if (const RawArray* c = find_case("constants"))
        for (const auto& s : c->strings) {
            size_t eq = s.find('=');
            if (eq == std::string::npos) throw io_error("'", path, "': malformed constant '", s, "'");
            f.constants.emplace_back(s.substr(0, eq), parse_tensor(s.substr(eq + 1)));
        }

    std::vector<std::pair<std::string, std::pair<int, int>>> shapes;
    if (const RawArray* sh = find_case("field_shapes"))
        for (const auto& s : sh->strings) {
            size_t eq = s.find('=');
            size_t x = s.find('x', eq);
            shapes.emplace_back(s.substr(0, eq),
                                std::make_pair(std::stoi(s.substr(eq + 1, x - eq - 1)),
                                               std::stoi(s.substr(x + 1))));
        }
    auto shape_of = [&](const std::string& name, int default_rows) {
        for (const auto& [n, sh] : shapes)
            if (n == name) return sh;
        return std::make_pair(default_rows, 1);
    };

    f.positions.reserve(n_points);
    for (long i = 0; i < n_points; ++i) {
        Tensor p = Tensor::zeros(f.dimension, 1);
        for (int a = 0; a < f.dimension; ++a) p(a) = points[i * 3 + a];
        f.positions.push_back(std::move(p));
    }

    for (const auto& arr : point_arrays) {
        ResultFrame::FieldValues fd;
        fd.name = arr.name;
        fd.values.reserve(arr.tuples);
        auto [rows, cols] = arr.comps == 1 ? std::make_pair(1, 1)
                                           : shape_of(arr.name, std::min(3, f.dimension));
        if (arr.comps == 3 && rows * cols > 3) rows = 3, cols = 1;  // padded vector
        for (long i = 0; i < arr.tuples; ++i) {
            Tensor t = Tensor::zeros(rows, cols);
            int k = 0;
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c) t(r, c) = arr.data[i * arr.comps + k++];
            fd.values.push_back(std::move(t));
        }
        f.fields.push_back(std::move(fd));
    }
    return f;
}

}  // namespace nauticle
