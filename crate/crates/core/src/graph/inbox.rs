use std::collections::VecDeque;

use super::CommGraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope<M> {
    pub from: usize,
    pub sent_round: usize,
    pub deliver_round: usize,
    pub message: M,
}

/// Per-agent FIFO delivering each message exactly `d` rounds after it was sent.
#[derive(Debug, Clone)]
pub struct DelayedInbox<M> {
    delay: usize,
    adj: Vec<Vec<usize>>,
    queues: Vec<VecDeque<Envelope<M>>>,
    sent: u64,
    received: u64,
}

impl<M: Clone> DelayedInbox<M> {
    pub fn new(g: &CommGraph) -> Self {
        let n = g.n_agents();
        DelayedInbox {
            delay: g.edge_delay(),
            adj: (0..n).map(|v| g.neighbors(v).to_vec()).collect(),
            queues: (0..n).map(|_| VecDeque::new()).collect(),
            sent: 0,
            received: 0,
        }
    }

    pub fn delay(&self) -> usize {
        self.delay
    }

    /// Sends `message` over the edge `from -> to` at round `t`.
    pub fn send(&mut self, from: usize, to: usize, t: usize, message: M) -> Result<()> {
        if from >= self.adj.len() || self.adj[from].binary_search(&to).is_err() {
            return Err(Error::NotAnEdge(from, to));
        }
        let q = &mut self.queues[to];
        if q.back().is_some_and(|e| e.sent_round > t) {
            return Err(Error::Protocol(format!("send at round {t} after a later send to agent {to}")));
        }
        q.push_back(Envelope { from, sent_round: t, deliver_round: t + self.delay, message });
        self.sent += 1;
        Ok(())
    }

    /// Sends a copy of `message` to every neighbour of `from`.
    pub fn broadcast(&mut self, from: usize, t: usize, message: &M) -> Result<()> {
        for i in 0..self.adj[from].len() {
            let to = self.adj[from][i];
            self.send(from, to, t, message.clone())?;
        }
        Ok(())
    }

    /// Removes and returns every message addressed to `agent` that is due by
    /// round `t`, in send order. Called once per round this yields exactly the
    /// messages sent at `t - d`.
    pub fn receive(&mut self, agent: usize, t: usize) -> Vec<Envelope<M>> {
        let q = &mut self.queues[agent];
        let mut out = Vec::new();
        while q.front().is_some_and(|e| e.deliver_round <= t) {
            out.push(q.pop_front().expect("front checked"));
        }
        self.received += out.len() as u64;
        out
    }

    pub fn total_sent(&self) -> u64 {
        self.sent
    }

    pub fn total_received(&self) -> u64 {
        self.received
    }

    pub fn in_flight(&self) -> u64 {
        self.queues.iter().map(|q| q.len() as u64).sum()
    }
}
