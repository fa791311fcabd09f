"""A deliberately small GRU encoder-decoder with beam-search decoding."""

from __future__ import annotations

import torch
from torch import nn

from .data import Vocab


class Seq2Seq(nn.Module):
    def __init__(self, vocab_size: int, embed: int = 32, hidden: int = 64):
        super().__init__()
        self.embed = nn.Embedding(vocab_size, embed)
        self.encoder = nn.GRU(embed, hidden, batch_first=True)
        self.decoder = nn.GRU(embed, hidden, batch_first=True)
        self.project = nn.Linear(hidden, vocab_size)

    def encode(self, src: torch.Tensor) -> torch.Tensor:
        _, state = self.encoder(self.embed(src))
        return state

    def decode_step(self, tok: torch.Tensor, state: torch.Tensor):
        out, state = self.decoder(self.embed(tok), state)
        return self.project(out), state

    def forward(self, src: torch.Tensor, tgt_in: torch.Tensor) -> torch.Tensor:
        state = self.encode(src)
        logits, _ = self.decoder(self.embed(tgt_in), state)
        return self.project(logits)


@torch.no_grad()
def beam_search(
    model: Seq2Seq,
    vocab: Vocab,
    source: list[str],
    beam: int,
    max_len: int = 256,
) -> list[tuple[list[str], float]]:
    """Top `beam` decoded sequences with their summed token log-probabilities."""
    model.eval()
    src = torch.tensor([vocab.encode(source)], dtype=torch.long)
    state = model.encode(src)
    # each hypothesis: (logprob, tokens, state, finished)
    hyps = [(0.0, [vocab.bos], state, False)]
    for _ in range(max_len):
        if all(h[3] for h in hyps):
            break
        grown: list[tuple[float, list[int], torch.Tensor, bool]] = []
        for logprob, toks, st, done in hyps:
            if done:
                grown.append((logprob, toks, st, True))
                continue
            inp = torch.tensor([[toks[-1]]], dtype=torch.long)
            logits, new_state = model.decode_step(inp, st)
            logps = torch.log_softmax(logits[0, -1], dim=-1)
            top = torch.topk(logps, beam)
            for lp, idx in zip(top.values.tolist(), top.indices.tolist()):
                grown.append(
                    (logprob + lp, toks + [idx], new_state, idx == vocab.eos)
                )
        grown.sort(key=lambda h: h[0], reverse=True)
        hyps = grown[:beam]
    out = [(vocab.decode(toks), lp) for lp, toks, _, _ in hyps]
    out.sort(key=lambda c: c[1], reverse=True)
    return out[:beam]
