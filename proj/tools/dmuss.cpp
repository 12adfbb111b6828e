#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dmuss/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Capacity checking, synthesis, verification and codec for "
               "distributed multi-user secret sharing schemes"};
  app.require_subcommand(1);

  dmuss::cli::CheckOptions check_opts;
  CLI::App* check = app.add_subcommand("check", "Decide capacity-region membership");
  check->add_option("input", check_opts.input_path, "Topology JSON file")->required();
  check->add_option("--privacy", check_opts.privacy, "perfect or weak")
      ->check(CLI::IsMember({"perfect", "weak"}));
  check->add_option("--method", check_opts.method, "matching or enumerate")
      ->check(CLI::IsMember({"matching", "enumerate"}));

  dmuss::cli::SynthOptions synth_opts;
  CLI::App* synth = app.add_subcommand("synth", "Construct a scheme for a feasible rate tuple");
  synth->add_option("input", synth_opts.input_path, "Topology JSON file")->required();
  std::uint64_t synth_q = 0;
  CLI::Option* q_opt = synth->add_option("--q", synth_q, "Field modulus override (prime)");
  synth->add_option("--seed", synth_opts.seed, "Assignment seed");
  synth->add_option("--out", synth_opts.out_path, "Scheme output file (default: stdout)");

  dmuss::cli::VerifyOptions verify_opts;
  CLI::App* verify = app.add_subcommand("verify", "Certify a scheme file");
  verify->add_option("scheme", verify_opts.scheme_path, "Scheme JSON file")->required();
  verify->add_option("--mode", verify_opts.mode, "ranks, entropy or both")
      ->check(CLI::IsMember({"ranks", "entropy", "both"}));
  verify->add_option("--max-states", verify_opts.max_states,
                     "Entropy enumeration cap (default 1e6, env DMUSS_MAX_STATES)");

  dmuss::cli::EncodeOptions encode_opts;
  CLI::App* encode = app.add_subcommand("encode", "Place messages and keys into shares");
  encode->add_option("scheme", encode_opts.scheme_path, "Scheme JSON file")->required();
  encode->add_option("payload", encode_opts.payload_path, "Payload JSON file")->required();
  encode->add_option("--keys", encode_opts.keys_path, "Explicit key file");
  std::uint64_t encode_seed = 0;
  CLI::Option* seed_opt = encode->add_option("--seed", encode_seed, "Key seed");
  encode->add_option("--out", encode_opts.out_path, "Share output file (default: stdout)");

  dmuss::cli::DecodeOptions decode_opts;
  CLI::App* decode = app.add_subcommand("decode", "Recover one user's messages from shares");
  decode->add_option("scheme", decode_opts.scheme_path, "Scheme JSON file")->required();
  decode->add_option("user", decode_opts.user, "User index (1-based)")->required();
  decode->add_option("shares", decode_opts.shares_path, "Share JSON file")->required();

  CLI::App* demo = app.add_subcommand("demo", "Walk the pipeline on the built-in example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dmuss::cli::kExitUsage;
  }

  if (*check) return dmuss::cli::run_check(check_opts, std::cout, std::cerr);
  if (*synth) {
    if (*q_opt) synth_opts.q = synth_q;
    return dmuss::cli::run_synth(synth_opts, std::cout, std::cerr);
  }
  if (*verify) return dmuss::cli::run_verify(verify_opts, std::cout, std::cerr);
  if (*encode) {
    if (*seed_opt) encode_opts.seed = encode_seed;
    return dmuss::cli::run_encode(encode_opts, std::cout, std::cerr);
  }
  if (*decode) return dmuss::cli::run_decode(decode_opts, std::cout, std::cerr);
  if (*demo) return dmuss::cli::run_demo(std::cout, std::cerr);
  return dmuss::cli::kExitUsage;
}
