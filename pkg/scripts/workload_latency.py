"""Per-task roofline latency and energy on H100 vs A100, with relative deltas.

    python3 scripts/workload_latency.py
"""

from llmspace import load_catalog
from llmspace.workload import estimate_task


def main():
    catalog = load_catalog()
    model = catalog.lookup("model", "CodeLlama-34B")
    h100, a100 = catalog.lookup("accelerator", "H100-SXM"), catalog.lookup("accelerator", "A100-SXM")
    print(f"{'task':<9}{'ttft H100 s':>12}{'ttft A100 s':>12}{'dTTFT':>8}{'dTBT':>8}{'dE2E':>8}"
          f"{'prefill J':>11}{'decode J':>11}{'tx J':>10}")
    deltas = []
    for name in catalog.names("task"):
        task = catalog.lookup("task", name)
        h, a = estimate_task(model, h100, task).mean, estimate_task(model, a100, task).mean
        d = (a.ttft / h.ttft - 1, a.tbt / h.tbt - 1, a.e2e / h.e2e - 1)
        deltas.append(d)
        print(f"{name:<9}{h.ttft:>12.4f}{a.ttft:>12.4f}{d[0]:>+8.0%}{d[1]:>+8.0%}{d[2]:>+8.0%}"
              f"{h.prefill_energy:>11.1f}{h.decode_energy:>11.1f}{h.tx_energy:>10.2e}")
    mean = [sum(col) / len(col) for col in zip(*deltas)]
    print(f"{'mean':<9}{'':>24}{mean[0]:>+8.0%}{mean[1]:>+8.0%}{mean[2]:>+8.0%}")


if __name__ == "__main__":
    main()
