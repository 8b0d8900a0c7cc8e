//! Logical co-scheduling: independent jobs written as futures each await the
//! passes they need; whenever every job is blocked, one physical pass feeds all
//! of their consumers at once.

use std::any::Any;
use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::future::Future;
use std::pin::Pin;
use std::task::{Context, Poll, Waker};

use super::{EdgeConsumer, PassRunner, SpaceMeter};
use crate::error::{Error, Result};

pub type LocalFuture<'a, T> = Pin<Box<dyn Future<Output = T> + 'a>>;

trait Slot {
    fn consumer(&mut self) -> &mut dyn EdgeConsumer;
    fn into_any(self: Box<Self>) -> Box<dyn Any>;
}

impl<C: EdgeConsumer + 'static> Slot for C {
    fn consumer(&mut self) -> &mut dyn EdgeConsumer {
        self
    }
    fn into_any(self: Box<Self>) -> Box<dyn Any> {
        self
    }
}

pub struct CoScheduler<'r, 's> {
    runner: &'r PassRunner<'s>,
    waiting: RefCell<Vec<(usize, Box<dyn Slot>)>>,
    finished: RefCell<HashMap<usize, Box<dyn Slot>>>,
    next_id: Cell<usize>,
}

impl<'r, 's> CoScheduler<'r, 's> {
    pub fn new(runner: &'r PassRunner<'s>) -> Self {
        CoScheduler {
            runner,
            waiting: RefCell::new(Vec::new()),
            finished: RefCell::new(HashMap::new()),
            next_id: Cell::new(0),
        }
    }

    pub fn runner(&self) -> &'r PassRunner<'s> {
        self.runner
    }

    pub fn meter(&self) -> &SpaceMeter {
        self.runner.meter()
    }

    /// Reports `words` of persistent job state until the guard is dropped.
    pub fn charge(&self, words: usize) -> WordCharge<'_> {
        self.meter().alloc(words);
        WordCharge { meter: self.meter(), words }
    }

    /// Resolves to `consumer` after it has observed one full pass.
    pub fn pass<C: EdgeConsumer + 'static>(&self, consumer: C) -> PassFuture<'_, 'r, 's, C> {
        PassFuture { sched: self, state: PassState::New(Some(Box::new(consumer))) }
    }

    /// Drives `fut` to completion, running a shared pass each time it stalls.
    pub fn block_on<T>(&self, fut: impl Future<Output = T>) -> Result<T> {
        let mut fut = std::pin::pin!(fut);
        let mut cx = Context::from_waker(Waker::noop());
        loop {
            if let Poll::Ready(out) = fut.as_mut().poll(&mut cx) {
                return Ok(out);
            }
            let mut batch = std::mem::take(&mut *self.waiting.borrow_mut());
            if batch.is_empty() {
                return Err(Error::Invariant("job stalled without requesting a pass".into()));
            }
            let mut consumers: Vec<&mut dyn EdgeConsumer> =
                batch.iter_mut().map(|(_, s)| s.consumer()).collect();
            self.runner.run_pass(&mut consumers)?;
            self.finished.borrow_mut().extend(batch);
        }
    }
}

pub struct WordCharge<'m> {
    meter: &'m SpaceMeter,
    words: usize,
}

impl Drop for WordCharge<'_> {
    fn drop(&mut self) {
        self.meter.free(self.words);
    }
}

enum PassState<C> {
    New(Option<Box<C>>),
    Waiting(usize),
}

pub struct PassFuture<'a, 'r, 's, C> {
    sched: &'a CoScheduler<'r, 's>,
    state: PassState<C>,
}

impl<C: EdgeConsumer + 'static> Future for PassFuture<'_, '_, '_, C> {
    type Output = C;

    fn poll(self: Pin<&mut Self>, _cx: &mut Context<'_>) -> Poll<C> {
        let this = self.get_mut();
        match &mut this.state {
            PassState::New(c) => {
                let id = this.sched.next_id.get();
                this.sched.next_id.set(id + 1);
                let slot: Box<dyn Slot> = c.take().expect("pass future polled after registration");
                this.sched.waiting.borrow_mut().push((id, slot));
                this.state = PassState::Waiting(id);
                Poll::Pending
            }
            PassState::Waiting(id) => match this.sched.finished.borrow_mut().remove(id) {
                Some(slot) => {
                    let c = slot.into_any().downcast::<C>().expect("slot type is fixed at registration");
                    Poll::Ready(*c)
                }
                None => Poll::Pending,
            },
        }
    }
}

/// Polls every unfinished child on each wake-up, so children blocked on the
/// same pass all register before the executor runs it.
pub fn join_all<'a, T: 'a>(futs: Vec<LocalFuture<'a, T>>) -> impl Future<Output = Vec<T>> + 'a {
    JoinAll { outs: futs.iter().map(|_| None).collect(), futs: futs.into_iter().map(Some).collect() }
}

struct JoinAll<'a, T> {
    futs: Vec<Option<LocalFuture<'a, T>>>,
    outs: Vec<Option<T>>,
}

// outputs are only moved, never pinned
impl<T> Unpin for JoinAll<'_, T> {}

impl<T> Future for JoinAll<'_, T> {
    type Output = Vec<T>;

    fn poll(self: Pin<&mut Self>, cx: &mut Context<'_>) -> Poll<Vec<T>> {
        let this = self.get_mut();
        let mut done = true;
        for (slot, out) in this.futs.iter_mut().zip(this.outs.iter_mut()) {
            if let Some(f) = slot {
                match f.as_mut().poll(cx) {
                    Poll::Ready(v) => {
                        *out = Some(v);
                        *slot = None;
                    }
                    Poll::Pending => done = false,
                }
            }
        }
        if done {
            Poll::Ready(this.outs.iter_mut().map(|o| o.take().expect("joined output")).collect())
        } else {
            Poll::Pending
        }
    }
}
