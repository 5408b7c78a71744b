# Network evaluation, input jets and parameter gradients.
from .network import NetworkParams, init_network
from .jets import Jet2, NestedJet2, eval_jet, eval_nested_jet
from .gradients import loss_param_grad
from .checkpoint import load_checkpoint, save_checkpoint

__all__ = [
    "NetworkParams",
    "init_network",
    "Jet2",
    "NestedJet2",
    "eval_jet",
    "eval_nested_jet",
    "loss_param_grad",
    "save_checkpoint",
    "load_checkpoint",
]
