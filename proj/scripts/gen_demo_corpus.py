#!/usr/bin/env python3
"""Generate the bundled demo corpus under data/demo/.

Deterministic: same script -> byte-identical tree. The corpus is sized so the
full pipeline (ingest -> ... -> train -> report) runs in well under a minute,
while still exercising every stage: license drops, sanity failures, short and
keyword-poor documents, one exact duplicate and three near-duplicate pairs.
"""

import json
import shutil
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
DEMO = ROOT / "data/demo"
CORPUS = DEMO / "corpus"

VERILOG_MODULES = [
    ("uart_tx", "serial transmitter with a programmable baud divider"),
    ("uart_rx", "serial receiver with majority-vote sampling"),
    ("fifo_sync", "synchronous first-in first-out buffer"),
    ("gray_counter", "gray code counter for clock domain crossing"),
    ("spi_master", "serial peripheral interface master controller"),
    ("i2c_slave", "two wire interface slave responder"),
    ("pwm_gen", "pulse width modulation generator"),
    ("debounce", "push button debouncer with a shift register"),
    ("edge_detect", "rising and falling edge detector"),
    ("clk_div", "integer clock divider"),
    ("priority_enc", "priority encoder for interrupt lines"),
    ("round_robin_arb", "round robin bus arbiter"),
    ("lfsr16", "sixteen bit linear feedback shift register"),
    ("onehot_fsm", "one hot encoded traffic light controller"),
    ("ram_dp", "dual port block ram wrapper"),
    ("alu8", "eight bit arithmetic logic unit"),
    ("shift_reg", "parallel load shift register"),
    ("watchdog", "watchdog timer with windowed kick"),
]


def verilog_body(name, desc, width=8, depth=16):
    return f"""// {name}: {desc}
// Generated demo RTL for the pipeline walkthrough corpus.
module {name} #(
    parameter WIDTH = {width},
    parameter DEPTH = {depth}
) (
    input  wire             clk,
    input  wire             rst_n,
    input  wire [WIDTH-1:0] din,
    input  wire             din_valid,
    output reg  [WIDTH-1:0] dout,
    output reg              dout_valid
);

  reg [WIDTH-1:0] stage [0:DEPTH-1];
  integer i;

  always @(posedge clk or negedge rst_n) begin
    if (!rst_n) begin
      dout       <= {{WIDTH{{1'b0}}}};
      dout_valid <= 1'b0;
      for (i = 0; i < DEPTH; i = i + 1)
        stage[i] <= {{WIDTH{{1'b0}}}};
    end else begin
      if (din_valid) begin
        stage[0] <= din;
        for (i = 1; i < DEPTH; i = i + 1)
          stage[i] <= stage[i-1];
      end
      dout       <= stage[DEPTH-1] ^ din;
      dout_valid <= din_valid;
    end
  end

endmodule
"""


SV_CLASSES = [
    ("pkt_item", "bus transaction item with randomizable payload"),
    ("axi_driver", "axi lite driver that wiggles the write channel"),
    ("scoreboard", "in order scoreboard comparing expected and actual"),
    ("cov_collector", "functional coverage collector for opcode bins"),
    ("reg_model", "register abstraction layer mirror model"),
    ("seq_smoke", "smoke test sequence issuing random reads"),
]


def sv_body(name, desc):
    return f"""// {name}: {desc}
// SystemVerilog verification component from the demo corpus.
class {name};
  rand bit [31:0] addr;
  rand bit [31:0] data;
  bit             is_write;

  function new();
    addr = '0;
    data = '0;
  endfunction

  function void display(string tag);
    $display("[%s] addr=%h data=%h write=%0d", tag, addr, data, is_write);
  endfunction

  constraint c_addr_align {{ addr[1:0] == 2'b00; }}
endclass

module {name}_tb;
  logic clk;
  {name} item;

  initial begin
    clk = 0;
    item = new();
    void'(item.randomize());
    item.display("{name}");
    $finish;
  end

  always #5 clk = ~clk;
endmodule
"""


VHDL_ENTITIES = [
    ("majority3", "three input majority voter"),
    ("bcd_adder", "binary coded decimal adder"),
    ("mux4", "four to one multiplexer"),
    ("seg7_dec", "seven segment display decoder"),
    ("sync_ff", "two stage synchronizer flip flops"),
    ("parity_gen", "even parity generator"),
    ("timer_ms", "millisecond tick timer"),
    ("stack_ctrl", "hardware stack pointer controller"),
    ("crc8", "crc eight checksum engine"),
    ("handshake", "four phase handshake controller"),
]


def vhdl_body(name, desc):
    return f"""-- {name}: {desc}
-- VHDL demo design used by the corpus pipeline walkthrough.
library ieee;
use ieee.std_logic_1164.all;
use ieee.numeric_std.all;

entity {name} is
  generic (
    WIDTH : integer := 8
  );
  port (
    clk     : in  std_logic;
    rst_n   : in  std_logic;
    enable  : in  std_logic;
    din     : in  std_logic_vector(WIDTH-1 downto 0);
    dout    : out std_logic_vector(WIDTH-1 downto 0)
  );
end entity {name};

architecture rtl of {name} is
  signal stage_q : unsigned(WIDTH-1 downto 0);
begin
  process (clk, rst_n)
  begin
    if rst_n = '0' then
      stage_q <= (others => '0');
    elsif rising_edge(clk) then
      if enable = '1' then
        stage_q <= unsigned(din) + 1;
      end if;
    end if;
  end process;

  dout <= std_logic_vector(stage_q);
end architecture rtl;
"""


CWE_TEXTS = [
    ("cwe_1189_pin_mux.txt", """CWE style weakness note: improper isolation of shared resources on a
system on chip. A SoC exposes a limited number of pins, and a single pin can
be configured to serve several functions through pin multiplexing. When the
multiplexer control registers are writable from untrusted software, a low
privilege context can reroute a debug function onto a production pin and
observe internal state. Mitigation: lock the pin multiplexing configuration
after boot and gate the control register behind a privilege check in RTL."""),
    ("cwe_1191_debug.txt", """CWE style weakness note: on chip debug and test interface with improper
access control. JTAG and other scan interfaces remain active in production
silicon on many an asic, letting an attacker halt cores, read memory, and
inject state. The weakness sits in the RTL access control around the test
access port. Mitigation: fuse off or authenticate the debug port, and verify
the lockout with a directed testbench before tapeout of the asic."""),
    ("cwe_1231_lock_bypass.txt", """CWE style weakness note: improper prevention of lock bit modification. A
write once lock bit guards configuration registers in the SoC power manager,
but the reset controller restores the unlocked default on a warm reset while
the register file keeps its contents. Software can therefore glitch the lock
by requesting a partial reset. The RTL fix is to make the lock sticky across
every reset domain except full power on reset, and to cover the case in the
verification plan with an assertion based testbench."""),
    ("cwe_1240_crypto.txt", """CWE style weakness note: use of a cryptographic primitive with a risky
implementation. A hardware random number source inside the asic feeds a key
generation block, yet the entropy conditioner is a bare LFSR in RTL rather
than a vetted construction. Keys derived this way cluster badly. Mitigation:
use an approved conditioning function, and test the raw entropy source with
continuous health checks in hardware before release to synthesis."""),
    ("cwe_1254_comparison.txt", """CWE style weakness note: incorrect comparison logic granularity. A password
check inside the secure element compares secret bytes one at a time and
aborts on the first mismatch, so the response time of the netlist reveals
how many leading bytes were right. Mitigation: compare the full width in
constant time in RTL, accumulate the difference bits, and only branch on the
final reduced flag after every byte has been examined in the design."""),
    ("cwe_1271_reset_x.txt", """CWE style weakness note: uninitialized value on reset for registers holding
security state. Several control flops in the SoC boot chain have no reset
term, so their power up value is undefined in the netlist and differs
between dies. If the secure boot latch starts at one, verification never
sees the insecure state. Mitigation: reset every security critical register
explicitly, and lint the RTL for missing reset terms before synthesis."""),
    ("cwe_1277_firmware.txt", """CWE style weakness note: firmware not updateable on a fielded device. The
boot rom of the microcontroller masks its loader into the asic with no
second image slot, so a flaw found after tapeout cannot be patched. The
weakness is architectural rather than a bug in a single verilog file.
Mitigation: keep an authenticated update path with rollback protection, and
exercise it in the system level testbench as part of signoff."""),
    ("cwe_1300_sidechannel.txt", """CWE style weakness note: improper protection against physical side channels.
The aes core in this SoC drives its sbox directly from the key schedule, and
the power trace of the netlist correlates with key bytes. Mitigation in RTL:
mask the sbox inputs, balance the datapath, and insert random pre charge
cycles; then measure again on the fpga prototype with the same testbench to
confirm the leakage assessment before committing to asic synthesis."""),
    ("cwe_226_reuse.txt", """CWE style weakness note: sensitive information in resource not removed
before reuse. The dma engine of the SoC hands buffers between security
domains without scrubbing, so key material from the crypto block remains in
shared sram and a later netlist transaction from the normal world can read
it back. Mitigation: zero the buffer in hardware on ownership change and
prove the scrub with a formal property in the verification environment."""),
    ("cwe_440_behavior.txt", """CWE style weakness note: expected behavior violation in a bus bridge. The
ahb to apb bridge in the design acknowledges a write before the downstream
peripheral accepts it, so an abort on the slow side is silently dropped in
the RTL. Drivers then believe a control register was programmed. Mitigation:
propagate the error response end to end and add a directed testbench case
for every peripheral abort path in the SoC integration suite."""),
    ("cwe_hw_overview.txt", """Overview note for the hardware weakness catalog in this corpus. Each entry
pairs a short description of a hardware weakness with the RTL level cause
and a mitigation hint. Entries reference the CWE catalog; the demo keeps the
texts small. Topics span pin multiplexing on a SoC, debug port lockdown,
reset handling in the netlist, side channels in crypto cores, and bus bridge
protocol mistakes. The set gives the tier accounting a security category
with realistic verilog adjacent prose for the filtering keywords."""),
    ("cwe_glossary.txt", """Glossary for the security notes. RTL: register transfer level source such as
verilog or vhdl. Netlist: the gate level form emitted by synthesis. SoC:
system on chip, a die integrating cores and peripherals. Testbench: the
verification harness driving stimulus into a design. Fuse: one time
programmable bit used to lock configuration. Scan: the shift chain used for
production test, a classic leak path when left open in the asic."""),
]

TRUSTHUB_TEXTS = [
    ("trojan_t100_note.txt", """Benchmark note: a combinational hardware trojan inserted into an aes
encryption core. The trigger is a rare plaintext pattern and the payload
leaks one key byte over a covert output. The infected RTL differs from the
golden verilog by eleven gates after synthesis, which makes netlist level
diffing a practical detection route in this benchmark family for the fpga
evaluation board used by the course."""),
    ("trojan_s200_note.txt", """Benchmark note: a sequential trojan in a uart controller. A counter armed by
an unusual baud configuration fires after two million idle cycles and forces
the transmit line low, a denial of service payload. Detection guidance:
compare state machine reachability between golden and suspect RTL, then run
the regression testbench with the trigger configuration included in the
stimulus set for the SoC integration."""),
    ("trojan_detect_survey.txt", """Survey fragment: trojan detection techniques split into logic testing, side
channel analysis, and structural netlist analysis. Logic testing struggles
with rare triggers; side channel methods compare power or delay signatures
against a golden model; structural methods mine the synthesis output for
low activity nets. Combining a directed testbench with netlist screening
catches the widest class in the benchmark suite on the fpga platform."""),
    ("pcb_tamper_note.txt", """Board level note: tamper detection for a secure module. A serpentine trace
mesh covers the package; breaking the mesh changes a measured rtl visible
resistance code and zeroizes keys. The note documents mesh routing rules,
the sensing circuit, and the bring up testbench procedure used to calibrate
thresholds on the asic evaluation unit during certification testing."""),
    ("supply_chain_note.txt", """Supply chain note: recycled integrated circuits re enter the market with
worn parameters. Detection uses silicon odometers such as ring oscillator
aging sensors embedded in the SoC, plus electrical screening against a
golden distribution. The note records the sensor RTL block, its synthesis
constraints, and the acceptance thresholds used by the screening testbench
in the provenance program for the fpga modules."""),
    ("watermark_note.txt", """IP protection note: constraint based watermarking for reusable cores. The
author encodes a signature into don't care choices during synthesis so the
netlist carries a verifiable mark with negligible overhead. Verification
extracts the mark from the placed design. The note lists the encoding, the
extraction testbench, and the statistical strength estimate for the verilog
cores shipped in the library for SoC integrators."""),
]

ARXIV_TEXTS = [
    ("abs_hls_sched.txt", """Abstract: we present a scheduling algorithm for high level synthesis that
balances register pressure against wire length on the fpga fabric. On a
suite of verilog kernels the method improves achievable clock frequency by
nine percent over list scheduling while keeping lookup table usage flat.
The tool emits synthesizable RTL and a testbench for each benchmark kernel,
and we release the netlist level results for every asic corner evaluated."""),
    ("abs_dv_ml.txt", """Abstract: coverage closure in constrained random verification is slow. We
train a gradient boosted model on testbench features to predict which seeds
reach new coverage bins for a SoC interconnect, cutting simulation hours by
a third. The model consumes RTL signal traces and emits seed rankings. We
discuss integration with a verilog simulator and the limits of transfer
between designs, including an industrial asic case study."""),
    ("abs_openeda.txt", """Abstract: we survey the open source electronic design automation landscape
from RTL synthesis through place and route to sign off. The flow lowers the
entry barrier for asic prototyping: a student team can take verilog to a
manufactured SoC via a shared shuttle. We quantify quality gaps against
commercial tools on netlist area and timing, and list the verification
holes, including the scarcity of open testbench infrastructure for fpga."""),
    ("abs_formal_cdc.txt", """Abstract: clock domain crossings are a dominant source of silicon respins.
We formalize crossing protocols as refinement obligations over the RTL and
discharge them with a portfolio solver, finding four protocol violations in
an open SoC that escaped the regression testbench and simulation. The
method scales to a million gate netlist within an hour on one core, and the
counterexamples replay directly in a verilog simulator for debug."""),
    ("abs_mem_compiler.txt", """Abstract: embedded memory dominates die area in modern asic designs. We
describe an open memory compiler producing sram macros with verified timing
models and a verilog behavioral view for simulation and synthesis. Against
foundry macros the compiled arrays are within six percent density. We
validate each macro with a self checking testbench and publish the netlist
views used by the SoC reference flow and the fpga emulation bridge."""),
    ("abs_power_est.txt", """Abstract: early power estimation guides architecture choices long before a
netlist exists. We learn a regression from RTL level activity features to
post synthesis power across an asic corpus, reaching twelve percent mean
error. The model transfers to unseen fpga designs after calibration on ten
samples. We analyze which verilog constructs carry predictive signal and
ship the feature extractor with a testbench harness for reproduction."""),
    ("abs_fuzz_rtl.txt", """Abstract: we adapt coverage guided fuzzing to hardware: the fuzzer mutates
instruction streams while an instrumented RTL simulator reports toggle and
branch coverage on the SoC under test. The approach uncovers three
architectural bugs in an open source core missed by its own testbench and
regression suite. We compare against constrained random verification and
release our verilog instrumentation pass and the netlist coverage maps."""),
    ("abs_analog_gen.txt", """Abstract: analog block generators remain the missing piece of fully open
silicon. We contribute a parameterized generator for ring oscillators,
temperature sensors, and an eight bit sar adc, each with an RTL behavioral
model for SoC integration and a characterization testbench. Measured
silicon from a shuttle run matches the model within design targets, and
synthesis ready verilog wrappers connect the blocks to the digital fabric."""),
]

WIKI_TEXTS = [
    ("wiki_verilog.txt", """Verilog is a hardware description language used to model electronic
systems at the register transfer level. Designers describe combinational
and sequential logic in modules, simulate behavior with a testbench, and
hand the source to synthesis tools that map it onto an fpga or an asic
standard cell library, producing a gate level netlist. The language was
standardized as IEEE 1364 and later folded into SystemVerilog, which adds
verification features such as classes, constrained randomization, and
assertions used widely in SoC development."""),
    ("wiki_vhdl.txt", """VHDL is a strongly typed hardware description language originating from a
United States department of defense program in the nineteen eighties. A
design is split into an entity declaring the interface and an architecture
describing behavior or structure. Like verilog it supports simulation with
a testbench and synthesis to an fpga or asic netlist. VHDL remains popular
in aerospace and in European industry, and the two languages interoperate
inside most RTL tool flows used for SoC design."""),
    ("wiki_fpga.txt", """A field programmable gate array is an integrated circuit whose logic fabric
can be configured after manufacturing. The fabric consists of lookup
tables, flip flops, block ram, and routing switches programmed by a
bitstream produced from RTL source through synthesis and place and route.
An fpga trades clock speed and power against the cost and lead time of an
asic, and is the standard vehicle for prototyping a SoC before tapeout,
with the same verilog testbench reused across both targets."""),
    ("wiki_asic.txt", """An application specific integrated circuit is a chip designed for one
purpose rather than general programmability. The flow moves from RTL
written in verilog or VHDL through logic synthesis into a technology mapped
netlist, then physical design, sign off, and mask making. Unit cost is low
at volume while the mask set is expensive, so teams prototype on an fpga
and run silicon only after functional verification and a full regression
testbench have closed coverage on the SoC."""),
    ("wiki_logic_synthesis.txt", """Logic synthesis transforms a register transfer level description into an
optimized gate level netlist for a target library. Steps include parsing
verilog, elaboration, technology independent optimization, and technology
mapping into cells or fpga lookup tables, under timing constraints. Formal
equivalence checking then compares RTL against the netlist so that the
synthesis step cannot silently change behavior, a cornerstone of every
modern asic and SoC methodology alongside the simulation testbench."""),
    ("wiki_soc.txt", """A system on chip integrates processor cores, memory controllers, and
peripherals on one die. Integration shortens wires, cutting power and cost
relative to a board of discrete chips. A SoC team assembles licensed IP
blocks and in house RTL, verifies the whole with simulation testbench
farms and emulation on fpga, then drives synthesis and physical design to
a netlist for the foundry. Software bring up proceeds in parallel on
virtual platforms before the asic returns from fabrication."""),
    ("wiki_hdl_sim.txt", """Hardware description language simulators execute verilog or VHDL designs
against a testbench to observe behavior before committing to hardware.
Event driven simulation schedules value changes on signals; cycle based and
hybrid engines accelerate synchronous RTL. Coverage metrics record which
statements and conditions the stimulus exercised, guiding verification
closure for the SoC. For speed, designs are also compiled onto an fpga in
emulation, keeping the same netlist semantics as synthesis."""),
    ("wiki_netlist.txt", """A netlist describes an electronic circuit as a list of components and the
nets connecting them. In digital flows the gate level netlist is emitted by
synthesis from RTL sources in verilog or VHDL and consumed by place and
route, timing analysis, and equivalence checking. Netlists also serve as
the handoff format between an asic design house and the foundry, and as
the loadable image for fpga prototyping of a SoC after mapping, with the
testbench rerun at this level for confidence."""),
]

STACKEX_TEXTS = [
    ("se_blocking.txt", """Question: when should I use blocking versus nonblocking assignments in
verilog? Answer: use nonblocking for sequential logic inside clocked always
blocks so simulated register updates match synthesis, and blocking for
combinational always blocks. Mixing them in one block is a classic source
of race conditions that a testbench may hide until the RTL meets the real
netlist timing on the fpga, at which point the mismatch surfaces as an
intermittent failure in the SoC bring up lab."""),
    ("se_latch_infer.txt", """Question: why does my combinational always block infer a latch during
synthesis? Answer: a latch appears when a signal is not assigned on every
path, so the tool must hold state. Add a default assignment before the case
statement or cover all branches. Latches complicate timing analysis of the
netlist and most fpga and asic style guides ban them in RTL outside special
cells; your verilog linter and your testbench assertions should both flag
the inference as an error."""),
    ("se_cdc_fifo.txt", """Question: how do I move data safely between clock domains in an fpga?
Answer: for single bits use a two flop synchronizer; for buses use an
asynchronous fifo with gray coded pointers, as in every SoC design. Never
synchronize a multi bit value with parallel flops, since skew lets fields
tear. Verify the crossing with a cdc lint pass over the RTL plus a
testbench that sweeps phase relationships before synthesis, and keep the
constraint file next to the verilog source in the repository."""),
    ("se_timing_closure.txt", """Question: my design fails timing after synthesis, what should I try first?
Answer: read the critical path report from the netlist, not the RTL. Common
fixes: retime long combinational chains, add pipeline registers, reduce fan
out on control signals, and floorplan hot blocks manually on the fpga. If
the path crosses clock domains reclassify it as a false path only when the
protocol genuinely tolerates it; hiding a real path will strand your asic,
as several SoC postmortems in the thread attest, testbench included."""),
    ("se_tb_selfcheck.txt", """Question: what makes a good self checking testbench? Answer: generate
stimulus and expected results together, compare inside the bench, and end
with an unambiguous pass or fail banner; never rely on a human reading
waveforms. Add functional coverage so you can measure what the random
stimulus exercised in the RTL of your SoC, and fold assertion checks into
the verilog modules themselves, so synthesis strips them but simulation
enforces invariants across the whole regression on fpga and asic."""),
    ("se_reset_style.txt", """Question: synchronous or asynchronous reset for my asic RTL? Answer: both
work when applied consistently. Asynchronous assert with synchronous
deassert is the common SoC compromise: the reset takes effect without a
clock yet releases cleanly. Budget reset fan out in synthesis, declare the
reset in the constraint file, and include power on cases in the testbench.
On an fpga prefer the fabric's native initialization where the vendor verilog
guides recommend it, and document the choice in the design notes."""),
    ("se_short_snippet.txt", """Question: quick one, does endmodule need a semicolon in verilog?
Answer: no."""),
    ("se_offtopic_cooking.txt", """Question: how long should I proof bread dough in a cold kitchen during
winter months? Answer: give it more time than the recipe says and judge by
volume rather than the clock. A slow first rise at sixteen degrees can take
five hours; the flavor improves as the ferment develops. A sealed box with
a cup of warm water holds a steadier temperature, and an overnight retard
in the refrigerator makes the crumb easier to shape for scoring."""),
]

BOOK_TEXTS = [
    ("book_ch1_abstraction.txt", """Chapter extract: digital design rests on a tower of abstractions. Boolean
algebra gives way to gates, gates to register transfer level descriptions
in verilog or VHDL, and RTL to the synthesized netlist placed onto silicon
or an fpga. Each level has its own verification story, from truth tables to
the self checking testbench, and the craft of the SoC engineer is knowing
which level a given bug actually lives on before reaching for a tool."""),
    ("book_ch4_pipelines.txt", """Chapter extract: pipelining raises throughput by overlapping work across
stages separated by registers. The cost is latency, control complexity, and
hazards. In RTL the designer balances stage depth against the clock target
the synthesis tool can meet on the chosen asic library or fpga fabric; the
testbench must then cover stalls, flushes, and forwarding paths, which is
where most SoC pipeline bugs hide in practice, deep in the verilog."""),
    ("book_ch7_memory.txt", """Chapter extract: memory hierarchies exploit locality. On chip sram banks
surround the cores of a SoC while external dram sits behind a controller;
the RTL for arbitration and refresh is notoriously easy to get subtly
wrong. Synthesis maps the banks onto macros rather than flops, so the
netlist must be checked against the memory compiler views, and the
testbench should hammer bank conflicts explicitly on fpga and asic."""),
    ("book_ch9_verification.txt", """Chapter extract: verification consumes the majority of a chip schedule.
A layered testbench separates stimulus generation, driving, monitoring, and
checking; constrained randomization explores the RTL state space while
functional coverage measures the exploration. Formal tools prove the
corner cases simulation cannot reach. The chapter closes with a checklist
for SoC signoff spanning verilog lint, synthesis warnings, netlist
equivalence, and the final regression on the fpga prototype."""),
]

C4_TEXTS = [
    ("c4_board_review.txt", """Review from an electronics blog: this development board pairs a mid range
fpga with generous block ram and a usable toolchain. The vendor ships
verilog example projects, a synthesis script, and a small testbench for
each peripheral, which beginners will appreciate. RTL compile times are
tolerable and the documentation explains the netlist reports rather than
hiding them, a refreshing choice for a hobby priced SoC prototyping kit."""),
    ("c4_career_post.txt", """Forum post: moving from software into hardware design. I spent a year
learning verilog at night, building RTL projects for an fpga board, and
writing a proper testbench for each one. Interviews focused on clock
domain crossings, synthesis constraints, and reading a netlist timing
report. The jump is real but doable; the SoC team cared more about debug
instincts than about memorized syntax, for what it is worth."""),
    ("c4_retro_console.txt", """Hobby write up: recreating a classic game console on an fpga. The video
chip is reimplemented in verilog from die photographs, cycle accurate down
to the quirks the original games exploit. A regression testbench compares
frames against captures from real hardware, and the synthesis fits with
room to spare, so the author bolted a debug SoC alongside the RTL to
stream internal state over usb for the netlist level comparisons."""),
    ("c4_weather_blog.txt", """Blog entry: the mountain forecast turned out wrong again this weekend, so
the group adjusted plans and followed the lower ridge, where the wind
stayed manageable and the views opened toward the lake. Lunch was long and
lazy at the saddle. On the descent the trail crew had cleared the winter
blowdown, and everyone made the last bus with twenty minutes to spare,
which counts as excellent logistics for this club, historically speaking."""),
    ("c4_recipe_page.txt", """Recipe page: a weeknight noodle bowl. Soak the rice noodles while the
aromatics sweat, then build the broth in layers: stock, a spoon of miso,
a splash of soy, and the chili crisp at the end so it keeps its texture.
Blanch whatever greens are in the drawer. Serving note: the soft egg wants
six and a half minutes exactly, then an ice bath; slice just before the
bowl goes to the table so the yolk stays glossy throughout dinner."""),
    ("c4_diy_nas.txt", """Post: building a quiet home storage box. I reused an office tower, swapped
the fans, and measured power at the wall before and after. The interesting
part for this corpus: the raid controller's fpga gets warm, and its fan
curve is set in firmware, so I patched the thermal table instead of adding
noise. File transfers saturate the link and parity rebuilds finish
overnight, which is all I wanted from the backup target in the closet."""),
]

COMMONCRAWL_TEXTS = [
    ("cc_uni_course.txt", """Course page: introduction to digital systems. Students design in verilog,
simulate with an open source tool, and map designs onto the lab fpga
boards. Weekly labs build toward a pipelined processor with a full
testbench; the final project tape outs a small asic through the shared
shuttle program. Syllabus topics include RTL style, synthesis flow,
timing closure, and SoC integration with a provided bus fabric."""),
    ("cc_vendor_news.txt", """Industry item: the vendor announced a new mid range SoC family with an on
package fpga fabric for customer differentiating logic. Partners receive
the RTL integration kit, reference verilog, synthesis scripts, and a
conformance testbench. Analysts note the netlist level security review
requirement for third party blocks, a first for this product line, citing
supply chain concerns raised by last year's trojan disclosures."""),
    ("cc_oss_release.txt", """Release note: version four of the open synthesis suite lands with faster
technology mapping, improved verilog coverage, and experimental VHDL
support. The release also bundles an equivalence checker for RTL to
netlist comparison and a coverage driven testbench runner. Maintainers
thank the fpga community for the bug reports that shook out the asic
corner cases in the timing engine during the beta cycle this spring."""),
    ("cc_gardening.txt", """Column: getting the allotment ready for spring. Turn the beds once the
frost lifts, work in last autumn's compost, and plan the rotation so the
brassicas move on from where they sulked last year. Early potatoes can go
in under fleece; save the tenderest seedlings for the cold frame. A rain
barrel by the shed pays for itself by July, and the robin will supervise
the whole operation from the fence as management always does."""),
    ("cc_hw_blog_dup_a.txt", """Long read: why formal verification finally went mainstream in hardware.
Ten years ago formal tools were a specialist purchase; today every serious
SoC team runs property checks beside the simulation testbench. The essay
walks through the solver advances, the RTL level property languages, the
integration with synthesis flows, and the economics: one caught netlist
bug pays for the licenses, and respins cost more than engineers. The
author closes with a checklist for adopting formal on a verilog code base
without stalling the schedule of the fpga prototype."""),
    ("cc_hw_blog_dup_b.txt", """Long read: why formal verification finally went mainstream in hardware.
A decade ago formal tools were a niche purchase; today every serious
SoC team runs property checks beside the simulation testbench. The essay
walks through the solver advances, the RTL level property languages, the
integration with synthesis flows, and the economics: one caught netlist
bug pays for the licenses, and respins cost more than engineers. The
author closes with a checklist for adopting formal on a verilog code base
without stalling the schedule of the fpga prototype."""),
]


def write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def main():
    if CORPUS.exists():
        shutil.rmtree(CORPUS)

    # --- hdl code: github snapshot ---
    gh = CORPUS / "github_hdl"
    for i, (name, desc) in enumerate(VERILOG_MODULES):
        write(gh / f"{name}.v", verilog_body(name, desc, width=4 + (i % 5) * 4,
                                             depth=8 + (i % 3) * 8))
    for name, desc in SV_CLASSES:
        write(gh / f"{name}.sv", sv_body(name, desc))
    # sanity failure: module without endmodule
    write(gh / "broken_counter.v", """// broken_counter: truncated file, kept to exercise the sanity checks
module broken_counter (
    input  wire clk,
    input  wire rst_n,
    output reg [7:0] count
);
  always @(posedge clk or negedge rst_n) begin
    if (!rst_n) count <= 8'h00;
    else        count <= count + 8'h01;
  end
// closing line lost in transit
""")
    # exact duplicate of an existing file under a different path
    write(gh / "vendored/uart_tx.v", (gh / "uart_tx.v").read_text())
    # near duplicate: same module body with renamed identifiers
    near = verilog_body("uart_tx", "serial transmitter with a programmable baud divider") \
        .replace("dout_valid", "tx_valid").replace("din_valid", "rx_valid")
    write(gh / "forks/uart_tx_fork.v", near)

    # --- hdl code: the stack snapshot ---
    st = CORPUS / "the_stack"
    for name, desc in VHDL_ENTITIES:
        write(st / f"{name}.vhd", vhdl_body(name, desc))
    for name, desc in VERILOG_MODULES[:6]:
        write(st / f"alt_{name}.v",
              verilog_body(f"alt_{name}", desc, width=16, depth=4))

    # --- hdl code with no license metadata (dropped by the license gate) ---
    oc = CORPUS / "opencores_unlicensed"
    write(oc / "mystery_ip.v", verilog_body("mystery_ip", "ip block of unknown origin"))
    write(oc / "mystery_pkg.vhd", vhdl_body("mystery_pkg", "package of unknown origin"))

    # --- security knowledge ---
    for fname, text in CWE_TEXTS:
        write(CORPUS / "cwe" / fname, text + "\n")
    for fname, text in TRUSTHUB_TEXTS:
        write(CORPUS / "trusthub" / fname, text + "\n")

    # --- curated natural language ---
    for fname, text in ARXIV_TEXTS:
        write(CORPUS / "arxiv" / fname, text + "\n")
    for fname, text in WIKI_TEXTS:
        write(CORPUS / "wikipedia" / fname, text + "\n")
    # near duplicate pair inside wikipedia
    dup = WIKI_TEXTS[0][1].replace("Designers describe", "Engineers describe") \
                          .replace("hand the source", "pass the source")
    write(CORPUS / "wikipedia" / "wiki_verilog_mirror.txt", dup + "\n")
    for fname, text in STACKEX_TEXTS:
        write(CORPUS / "stackexchange" / fname, text + "\n")
    for fname, text in BOOK_TEXTS:
        write(CORPUS / "books" / fname, text + "\n")

    # --- web natural language ---
    for fname, text in C4_TEXTS:
        write(CORPUS / "c4" / fname, text + "\n")
    for fname, text in COMMONCRAWL_TEXTS:
        write(CORPUS / "commoncrawl" / fname, text + "\n")
    # invalid utf-8 file (sanity failure path)
    (CORPUS / "commoncrawl" / "cc_mojibake.txt").write_bytes(
        b"scraped page with broken encoding \xff\xfe inside the byte stream, "
        b"kept to exercise the lossy decode path of the scanner.\n")

    n = sum(1 for p in CORPUS.rglob("*") if p.is_file())
    print(f"wrote {n} demo corpus files under {CORPUS}")


if __name__ == "__main__":
    main()
