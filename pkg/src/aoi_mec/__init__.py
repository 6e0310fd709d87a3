"""Mean age of information in large-scale partial-offloading MEC networks.

Subpackages:
  stp       radio layer (closed-form STP and SIR Monte Carlo)
  rates     physical parameters -> Jackson-network service rates
  analytic  closed-form MAoI (partial, local, remote) and appendix helpers
  sim       discrete-event Jackson-network simulation with AoI sawtooth
  optimizer constrained minimisation over offloading ratio and task rate
  experiments / cli  reproducible experiment harness
"""

__version__ = "0.1.0"

from . import analytic, optimizer, rates, sim, stp  # noqa: E402

__all__ = ["analytic", "optimizer", "rates", "sim", "stp", "__version__"]
