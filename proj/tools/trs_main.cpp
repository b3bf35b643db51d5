// Command-line front end: parameters, keys, encryption, key recovery, bench.
//
// Exit codes: 0 success, 1 domain failure, 2 I/O, format or usage error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "trs/attack.hpp"
#include "trs/cryptosystem.hpp"
#include "trs/errors.hpp"

using namespace trs;

namespace {

constexpr int kOk = 0;
constexpr int kDomain = 1;
constexpr int kIo = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("cannot write " + path);
}

std::string join(const std::vector<std::size_t>& v, char sep = ',') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

// "0..87,89..116"
std::string ranges(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j + 1 < v.size() && v[j + 1] == v[j] + 1) ++j;
    if (!s.empty()) s += ',';
    s += std::to_string(v[i]);
    if (j > i) s += ".." + std::to_string(v[j]);
    i = j + 1;
  }
  return s;
}

TrsParams require_params(std::uint64_t q0, std::size_t n, std::size_t k, unsigned l) {
  auto check = validate_params(q0, n, k, l);
  if (!check.ok()) {
    std::string msg = "invalid parameters:";
    for (const auto& v : check.violations) msg += "\n  violated: " + v;
    throw Error(Errc::invalid_argument, msg);
  }
  return *check.params;
}

int cmd_params(std::uint64_t q0, std::size_t n, std::size_t k, unsigned l) {
  auto check = validate_params(q0, n, k, l);
  if (!check.ok()) {
    for (const auto& v : check.violations) std::cout << "violated: " << v << "\n";
    return kDomain;
  }
  const auto& p = *check.params;
  std::cout << "r=" << p.r << " t=" << join(p.t) << " h=" << join(p.h) << " valid\n";
  std::cout << "I=" << ranges(p.I) << "\n";
  return kOk;
}

// One line of k elements; the final newline is required.
Vec read_message(const TrsParams& p, const std::string& text) {
  if (text.empty() || text.back() != '\n' || text.find('\n') != text.size() - 1)
    throw Error(Errc::format_error, "message must be exactly one newline-terminated line");
  return read_vector_line(p.tower(), text, p.k);
}

void print_audit(const attack::RecoveredKey& rk) {
  const FieldTower& t = rk.key.key.tower();
  std::cerr << "dim subfield subcode: " << rk.dim_sub << "\n"
            << "rank of Schur square: " << rk.rank_sq << "\n"
            << "shift b: " << t.to_hex(rk.b) << "\n"
            << "accepted shifts: " << rk.accepted_shifts.size() << "\n";
  std::cerr << "eta_hat:";
  for (Elem e : rk.key.key.eta) std::cerr << ' ' << t.to_hex(e);
  std::cerr << "\n";
  const auto& u = rk.us;
  std::cerr << "timings (us): subfield_subcode=" << u.subfield_subcode
            << " square=" << u.square << " sidelnikov_shestakov=" << u.sidelnikov_shestakov
            << " shift_search=" << u.shift_search << " eta=" << u.eta
            << " solve_s=" << u.solve_s << " total=" << u.total << "\n";
}

nlohmann::json bench_trial(const std::string& preset, const TrsParams& p,
                           std::uint64_t trial, std::uint64_t seed) {
  using Clock = std::chrono::steady_clock;
  nlohmann::json rec = {{"preset", preset}, {"q0", p.q0}, {"n", p.n}, {"k", p.k},
                        {"l", p.l},         {"trial", trial}, {"seed", seed}};
  Rng rng(seed);
  const auto t0 = Clock::now();
  KeyPair kp = keygen(p, rng);
  const auto keygen_us =
      std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0).count();
  try {
    attack::RecoveredKey rk = attack::recover_key(kp.pub);
    const auto& u = rk.us;
    rec["success"] = true;
    rec["accepted_shifts"] = rk.accepted_shifts.size();
    rec["timings_us"] = {{"keygen", keygen_us},
                         {"subfield_subcode", u.subfield_subcode},
                         {"square", u.square},
                         {"sidelnikov_shestakov", u.sidelnikov_shestakov},
                         {"shift_search", u.shift_search},
                         {"eta", u.eta},
                         {"solve_s", u.solve_s},
                         {"total", u.total}};
    if (rk.accepted_shifts.size() > 1)
      std::cerr << "warning: trial " << trial << " accepted " << rk.accepted_shifts.size()
                << " shifts\n";
  } catch (const Error& e) {
    rec["success"] = false;
    rec["error"] = e.what();
    rec["timings_us"] = {{"keygen", keygen_us}};
  }
  return rec;
}

const std::map<std::string, std::array<unsigned, 4>> kPresets = {
    {"table1", {256, 255, 117, 1}},
    {"small", {128, 127, 60, 1}},
    {"l2", {256, 255, 117, 2}},
};

int cmd_bench(const std::string& preset, std::uint64_t trials, std::uint64_t seed,
              const std::string& out_path) {
  const auto& q = kPresets.at(preset);
  const TrsParams p = require_params(q[0], q[1], q[2], q[3]);
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw IoError("cannot create " + out_path);
  std::uint64_t ok = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    auto rec = bench_trial(preset, p, i, derive_seed(seed, i));
    ok += rec["success"].get<bool>();
    out << rec.dump() << "\n" << std::flush;
    std::cerr << "trial " << i << ": " << (rec["success"].get<bool>() ? "ok" : "FAILED");
    if (rec["success"].get<bool>())
      std::cerr << " " << rec["timings_us"]["total"].get<std::int64_t>() << " us";
    std::cerr << "\n";
  }
  if (!out) throw IoError("cannot write " + out_path);
  std::cerr << ok << "/" << trials << " trials succeeded\n";
  return ok == trials ? kOk : kDomain;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted Reed-Solomon McEliece: keys, encryption and key recovery"};
  app.require_subcommand(1);

  std::uint64_t q0 = 0, seed = 0, trials = 1;
  std::size_t n = 0, k = 0;
  unsigned l = 0;
  std::string pub, priv, msg, ct, out, preset;
  bool audit = false;

  auto* params = app.add_subcommand("params", "validate a parameter set and print r, t, h, I");
  params->add_option("q0", q0)->required();
  params->add_option("n", n)->required();
  params->add_option("k", k)->required();
  params->add_option("l", l)->required();

  auto* kg = app.add_subcommand("keygen", "generate a key pair");
  kg->add_option("--q0", q0)->required();
  kg->add_option("--n", n)->required();
  kg->add_option("--k", k)->required();
  kg->add_option("--l", l)->required();
  kg->add_option("--seed", seed)->required();
  kg->add_option("--out-pub", pub)->required();
  kg->add_option("--out-priv", priv)->required();

  auto* enc = app.add_subcommand("encrypt", "encrypt a message file");
  enc->add_option("--pub", pub)->required();
  enc->add_option("--msg", msg)->required();
  enc->add_option("--seed", seed)->required();
  enc->add_option("--out", out)->required();

  auto* dec = app.add_subcommand("decrypt", "decrypt a ciphertext file");
  dec->add_option("--priv", priv)->required();
  dec->add_option("--ct", ct)->required();
  dec->add_option("--out", out)->required();

  auto* att = app.add_subcommand("attack", "recover a private key from a public key");
  att->add_option("--pub", pub)->required();
  att->add_option("--out-priv", priv)->required();
  att->add_flag("--audit", audit, "print intermediate results and stage timings");

  auto* ver = app.add_subcommand("verify", "check that a private key matches a public key");
  ver->add_option("--pub", pub)->required();
  ver->add_option("--priv", priv)->required();

  auto* bench = app.add_subcommand("bench", "repeated keygen and key recovery");
  bench->add_option("--preset", preset)->required()->check(
      CLI::IsMember({"table1", "small", "l2"}));
  bench->add_option("--trials", trials)->default_val(1);
  bench->add_option("--seed", seed)->default_val(0);
  bench->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kIo;
  }

  try {
    if (*params) return cmd_params(q0, n, k, l);

    if (*kg) {
      const TrsParams p = require_params(q0, n, k, l);
      Rng rng(seed);
      KeyPair kp = keygen(p, rng);
      write_file(pub, write_public(kp.pub));
      write_file(priv, write_private(kp.priv));
      std::cerr << "public key: " << kp.pub.size_bytes() << " bytes\n";
      return kOk;
    }

    if (*enc) {
      PublicKey pk = read_public(read_file(pub));
      Vec m = read_message(pk.params, read_file(msg));
      Rng rng(seed);
      write_file(out, write_ciphertext(pk.params, encrypt(m, pk, rng)));
      return kOk;
    }

    if (*dec) {
      PrivateKey sk = read_private(read_file(priv));
      Ciphertext c = read_ciphertext(read_file(ct));
      const auto& a = sk.key.params;
      const auto& b = c.params;
      if (a.q0 != b.q0 || a.n != b.n || a.k != b.k || a.l != b.l)
        throw Error(Errc::format_error, "ciphertext parameters differ from the key");
      write_file(out, write_vector_line(a.tower(), decrypt(c.y, sk)));
      return kOk;
    }

    if (*att) {
      PublicKey pk = read_public(read_file(pub));
      attack::RecoveredKey rk = attack::recover_key(pk);
      if (rk.accepted_shifts.size() > 1)
        std::cerr << "warning: " << rk.accepted_shifts.size()
                  << " shifts passed the containment test; using the first\n";
      if (audit) print_audit(rk);
      write_file(priv, write_private(rk.key));
      std::cerr << "key recovered in " << rk.us.total << " us\n";
      return kOk;
    }

    if (*ver) {
      PublicKey pk = read_public(read_file(pub));
      PrivateKey sk = read_private(read_file(priv));
      const auto& a = pk.params;
      const auto& b = sk.key.params;
      if (a.q0 != b.q0 || a.n != b.n || a.k != b.k || a.l != b.l) {
        std::cerr << "parameters differ\n";
        return kDomain;
      }
      if (!(public_from_private(sk).g_pub == pk.g_pub)) {
        std::cerr << "S * G_TRS differs from the public matrix\n";
        return kDomain;
      }
      std::cerr << "private key matches the public key\n";
      return kOk;
    }

    if (*bench) return cmd_bench(preset, trials, seed, out);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    std::cerr << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
    return e.code() == Errc::format_error ? kIo : kDomain;
  }
  return kIo;
}
