#include "lfperf/harness/structures.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <new>
#include <stdexcept>

#include "lfperf/harness/pool.hpp"

namespace lfperf::harness {
namespace {

using Word = std::uintptr_t;
constexpr Word kMark = 1;  // list / skip list: logically deleted
constexpr Word kFlag = 1;  // bst: leaf under deletion
constexpr Word kTag = 2;   // bst: edge frozen, parent about to be spliced
constexpr Word kBits = 3;

template <class T>
T* ptr(Word w) {
    return reinterpret_cast<T*>(w & ~kBits);
}
template <class T>
Word word(T* p) {
    return reinterpret_cast<Word>(p);
}

std::size_t line_slot(std::size_t bytes, bool packed) {
    const std::size_t s = packed ? 32 : 64;
    if (bytes > s) throw std::invalid_argument("node does not fit its layout slot");
    return s;
}

// ---- Harris-Michael list -------------------------------------------------------------------

struct ListNode {
    Key key;
    std::uint64_t value;
    std::atomic<Word> next;
};
static_assert(sizeof(ListNode) <= 24);

class ListCore {
public:
    ListCore(NodePool& pool, Ebr& ebr) : pool_(pool), ebr_(ebr) {}

    ListNode* make(int tid, Key k, ListNode* next) {
        auto* n = new (pool_.alloc(tid)) ListNode{k, static_cast<std::uint64_t>(k), {word(next)}};
        return n;
    }

    // Positions pred/curr around k, unlinking marked nodes on the way.
    bool find(ThreadCtx& c, ListNode* head, Key k, ListNode*& pred, ListNode*& curr) {
    retry:
        pred = head;
        curr = ptr<ListNode>(pred->next.load());
        while (true) {
            c.visit(curr->key);
            Word succ = curr->next.load();
            while (succ & kMark) {
                Word expected = word(curr);
                if (!pred->next.compare_exchange_strong(expected, succ & ~kMark)) goto retry;
                retire(c.tid, curr);
                curr = ptr<ListNode>(succ);
                c.visit(curr->key);
                succ = curr->next.load();
            }
            if (curr->key >= k) return curr->key == k;
            pred = curr;
            curr = ptr<ListNode>(succ);
        }
    }

    bool insert(ThreadCtx& c, ListNode* head, Key k) {
        ListNode* node = nullptr;
        while (true) {
            ListNode *pred, *curr;
            if (find(c, head, k, pred, curr)) {
                if (node) pool_.free(c.tid, node);
                return false;
            }
            if (!node) node = make(c.tid, k, curr);
            node->next.store(word(curr));
            Word expected = word(curr);
            if (pred->next.compare_exchange_strong(expected, word(node))) return true;
        }
    }

    bool remove(ThreadCtx& c, ListNode* head, Key k) {
        while (true) {
            ListNode *pred, *curr;
            if (!find(c, head, k, pred, curr)) return false;
            Word succ = curr->next.load();
            if (succ & kMark) continue;
            if (!curr->next.compare_exchange_strong(succ, succ | kMark)) continue;
            Word expected = word(curr);
            if (pred->next.compare_exchange_strong(expected, succ)) {
                retire(c.tid, curr);
            } else {
                find(c, head, k, pred, curr);
            }
            return true;
        }
    }

    bool contains(ThreadCtx& c, ListNode* head, Key k) {
        ListNode *pred, *curr;
        return find(c, head, k, pred, curr);
    }

    void retire(int tid, ListNode* n) { ebr_.retire(tid, n, &NodePool::reclaim, &pool_); }

private:
    NodePool& pool_;
    Ebr& ebr_;
};

class ChainedSet final : public ConcurrentSet {
public:
    // One chain per bucket; a linked list is the single-bucket case.
    ChainedSet(Key key_range, int load_factor, bool packed, int threads)
        : lf_(load_factor),
          ebr_(threads),
          pool_(line_slot(sizeof(ListNode), packed), threads),
          core_(pool_, ebr_) {
        const Key buckets = (key_range + lf_ - 1) / lf_;
        for (Key b = 0; b < buckets; ++b) {
            ListNode* tail = core_.make(0, std::numeric_limits<Key>::max(), nullptr);
            heads_.push_back(core_.make(0, std::numeric_limits<Key>::min(), tail));
        }
    }
    ~ChainedSet() override {
        ebr_.drain();
        for (ListNode* h : heads_) {
            Word w = word(h);
            while (ListNode* n = ptr<ListNode>(w)) {
                w = n->next.load();
                pool_.free(0, n);
            }
        }
    }

    bool insert(ThreadCtx& c, Key k) override {
        Ebr::Guard g(ebr_, c.tid);
        return core_.insert(c, head_of(k), k);
    }
    bool remove(ThreadCtx& c, Key k) override {
        Ebr::Guard g(ebr_, c.tid);
        return core_.remove(c, head_of(k), k);
    }
    bool contains(ThreadCtx& c, Key k) override {
        Ebr::Guard g(ebr_, c.tid);
        return core_.contains(c, head_of(k), k);
    }
    std::vector<Key> snapshot() const override {
        std::vector<Key> out;
        for (ListNode* h : heads_) {
            for (ListNode* n = ptr<ListNode>(h->next.load()); n->key != std::numeric_limits<Key>::max();
                 n = ptr<ListNode>(n->next.load())) {
                if (!(n->next.load() & kMark)) out.push_back(n->key);
            }
        }
        return out;
    }
    std::vector<const void*> node_addresses() const override {
        std::vector<const void*> out;
        for (ListNode* h : heads_) {
            for (ListNode* n = h; n; n = ptr<ListNode>(n->next.load())) out.push_back(n);
        }
        return out;
    }
    Ebr::Stats reclamation() const override { return ebr_.stats(); }
    std::size_t slot_size() const override { return pool_.slot_size(); }

private:
    ListNode* head_of(Key k) const {
        if (heads_.size() == 1) return heads_[0];
        return heads_[static_cast<std::size_t>((k - 1) / lf_)];
    }

    Key lf_;
    Ebr ebr_;
    NodePool pool_;
    ListCore core_;
    std::vector<ListNode*> heads_;
};

// ---- skip list -----------------------------------------------------------------------------

constexpr int kMaxLevels = 32;

struct SlRouting;
struct SlNode {
    Key key;
    std::uint64_t value;
    int top;
    std::atomic<int> owners;  // inserter + deleter; last one out retires
    std::atomic<Word> next0;
    SlRouting* rou;
};
struct SlRouting {
    std::atomic<Word> next[1];  // levels 1..top, allocated to size
};
static_assert(sizeof(SlNode) <= 64);

class SkipListSet final : public ConcurrentSet {
public:
    SkipListSet(Key key_range, int h_max, double q, int threads)
        : hm_(h_max),
          q_(q),
          ebr_(threads),
          pool_(64, threads),
          rou_pool_((static_cast<std::size_t>(h_max) * sizeof(Word) + 63) / 64 * 64, threads),
          seeds_(static_cast<std::size_t>(threads)) {
        if (h_max < 1 || h_max >= kMaxLevels) throw std::invalid_argument("skip list h_max out of range");
        for (std::size_t i = 0; i < seeds_.size(); ++i) seeds_[i].s = 0x9E3779B97F4A7C15ull * (i + 1);
        tail_ = make(0, key_range + 1, h_max);
        head_ = make(0, 0, h_max);
        for (int l = 0; l <= hm_; ++l) link(head_, l).store(word(tail_));
        (void)key_range;
    }
    ~SkipListSet() override {
        ebr_.drain();
        Word w = word(head_);
        while (SlNode* n = ptr<SlNode>(w)) {
            w = n->next0.load();
            destroy(0, n);
        }
    }

    bool insert(ThreadCtx& c, Key k) override {
        Ebr::Guard g(ebr_, c.tid);
        SlNode* preds[kMaxLevels];
        SlNode* succs[kMaxLevels];
        SlNode* node = nullptr;
        while (true) {
            if (find(c, k, preds, succs)) {
                if (node) destroy(c.tid, node);
                return false;
            }
            if (!node) node = make(c.tid, k, draw_height(c.tid));
            for (int l = 0; l <= node->top; ++l) link(node, l).store(word(succs[l]));
            Word expected = word(succs[0]);
            if (preds[0]->next0.compare_exchange_strong(expected, word(node))) break;
        }
        for (int l = 1; l <= node->top; ++l) {
            bool linked = false;
            while (!linked) {
                Word old = link(node, l).load();
                if (old & kMark) goto done;
                if (ptr<SlNode>(old) != succs[l] && !link(node, l).compare_exchange_strong(old, word(succs[l]))) {
                    goto done;  // marked under us
                }
                Word expected = word(succs[l]);
                if (link(preds[l], l).compare_exchange_strong(expected, word(node))) {
                    linked = true;
                } else if (!find(c, k, preds, succs) || succs[0] != node) {
                    goto done;  // node already deleted
                }
            }
        }
    done:
        // A deleter may have swept before we linked an upper level.
        if (node->next0.load() & kMark) find(c, k, preds, succs);
        release(c.tid, node);
        return true;
    }

    bool remove(ThreadCtx& c, Key k) override {
        Ebr::Guard g(ebr_, c.tid);
        SlNode* preds[kMaxLevels];
        SlNode* succs[kMaxLevels];
        if (!find(c, k, preds, succs)) return false;
        SlNode* node = succs[0];
        for (int l = node->top; l >= 1; --l) {
            Word w = link(node, l).load();
            while (!(w & kMark) && !link(node, l).compare_exchange_weak(w, w | kMark)) {
            }
        }
        Word w = node->next0.load();
        while (true) {
            if (w & kMark) return false;
            if (node->next0.compare_exchange_strong(w, w | kMark)) break;
        }
        find(c, k, preds, succs);
        release(c.tid, node);
        return true;
    }

    bool contains(ThreadCtx& c, Key k) override {
        Ebr::Guard g(ebr_, c.tid);
        SlNode* preds[kMaxLevels];
        SlNode* succs[kMaxLevels];
        return find(c, k, preds, succs);
    }

    std::vector<Key> snapshot() const override {
        std::vector<Key> out;
        for (SlNode* n = ptr<SlNode>(head_->next0.load()); n != tail_; n = ptr<SlNode>(n->next0.load())) {
            if (!(n->next0.load() & kMark)) out.push_back(n->key);
        }
        return out;
    }
    std::vector<const void*> node_addresses() const override {
        std::vector<const void*> out;
        for (SlNode* n = head_; n; n = ptr<SlNode>(n->next0.load())) {
            out.push_back(n);
            if (n->rou) out.push_back(n->rou);
        }
        return out;
    }
    Ebr::Stats reclamation() const override { return ebr_.stats(); }
    std::size_t slot_size() const override { return pool_.slot_size(); }

private:
    struct alignas(64) Seed {
        std::uint64_t s;
    };

    std::atomic<Word>& link(SlNode* n, int l) const { return l == 0 ? n->next0 : n->rou->next[l - 1]; }

    SlNode* make(int tid, Key k, int top) {
        auto* n = new (pool_.alloc(tid)) SlNode{k, static_cast<std::uint64_t>(k), top, {2}, {0}, nullptr};
        if (top >= 1) {
            n->rou = static_cast<SlRouting*>(rou_pool_.alloc(tid));
            for (int l = 0; l < top; ++l) new (&n->rou->next[l]) std::atomic<Word>(0);
        }
        return n;
    }
    void destroy(int tid, SlNode* n) {
        if (n->rou) rou_pool_.free(tid, n->rou);
        pool_.free(tid, n);
    }
    static void reclaim(void* self, int tid, void* p) {
        static_cast<SkipListSet*>(self)->destroy(tid, static_cast<SlNode*>(p));
    }
    void release(int tid, SlNode* n) {
        if (n->owners.fetch_sub(1) == 1) ebr_.retire(tid, n, &SkipListSet::reclaim, this);
    }

    int draw_height(int tid) {
        std::uint64_t& s = seeds_[static_cast<std::size_t>(tid)].s;
        int h = 0;
        while (h < hm_) {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            if (static_cast<double>(s >> 11) * 0x1.0p-53 >= q_) break;
            ++h;
        }
        return h;
    }

    bool find(ThreadCtx& c, Key k, SlNode** preds, SlNode** succs) {
    retry:
        SlNode* pred = head_;
        c.visit(head_->key);
        for (int l = hm_; l >= 0; --l) {
            SlNode* curr = ptr<SlNode>(link(pred, l).load());
            while (true) {
                c.visit(curr->key);
                Word succ = link(curr, l).load();
                while (succ & kMark) {
                    Word expected = word(curr);
                    if (!link(pred, l).compare_exchange_strong(expected, succ & ~kMark)) goto retry;
                    curr = ptr<SlNode>(succ);
                    c.visit(curr->key);
                    succ = link(curr, l).load();
                }
                if (curr->key < k) {
                    pred = curr;
                    curr = ptr<SlNode>(succ);
                } else {
                    break;
                }
            }
            preds[l] = pred;
            succs[l] = curr;
        }
        return succs[0]->key == k;
    }

    int hm_;
    double q_;
    Ebr ebr_;
    NodePool pool_;
    NodePool rou_pool_;
    std::vector<Seed> seeds_;
    SlNode* head_ = nullptr;
    SlNode* tail_ = nullptr;
};

// ---- Natarajan-Mittal external BST ------------------------------------------------------------

struct BstNode {
    Key key;
    std::atomic<Word> left;
    std::atomic<Word> right;
    bool leaf() const { return left.load() == 0; }
};
static_assert(sizeof(BstNode) <= 24);

class NatarajanBst final : public ConcurrentSet {
public:
    NatarajanBst(Key key_range, bool packed, int threads)
        : inf0_(key_range + 1),
          inf1_(key_range + 2),
          inf2_(key_range + 3),
          ebr_(threads),
          pool_(line_slot(sizeof(BstNode), packed), threads) {
        BstNode* l0 = make(0, inf0_, nullptr, nullptr);
        BstNode* l1 = make(0, inf1_, nullptr, nullptr);
        BstNode* l2 = make(0, inf2_, nullptr, nullptr);
        s_ = make(0, inf1_, l0, l1);
        r_ = make(0, inf2_, s_, l2);
    }
    ~NatarajanBst() override {
        ebr_.drain();
        free_subtree(word(r_));
    }

    bool insert(ThreadCtx& c, Key k) override {
        Ebr::Guard g(ebr_, c.tid);
        BstNode* new_leaf = nullptr;
        BstNode* new_int = nullptr;
        while (true) {
            const Seek s = seek(c, k);
            BstNode* leaf = s.leaf;
            if (leaf->key == k) {
                if (new_leaf) {
                    pool_.free(c.tid, new_leaf);
                    pool_.free(c.tid, new_int);
                }
                return false;
            }
            std::atomic<Word>& child = k < s.parent->key ? s.parent->left : s.parent->right;
            if (!new_leaf) {
                new_leaf = make(c.tid, k, nullptr, nullptr);
                new_int = make(c.tid, 0, nullptr, nullptr);
            }
            new_int->key = std::max(k, leaf->key);
            new_int->left.store(word(k < leaf->key ? new_leaf : leaf));
            new_int->right.store(word(k < leaf->key ? leaf : new_leaf));
            Word expected = word(leaf);
            if (child.compare_exchange_strong(expected, word(new_int))) return true;
            if (ptr<BstNode>(expected) == leaf && (expected & kBits)) cleanup(c.tid, k, s);
        }
    }

    bool remove(ThreadCtx& c, Key k) override {
        Ebr::Guard g(ebr_, c.tid);
        bool injecting = true;
        BstNode* leaf = nullptr;
        while (true) {
            const Seek s = seek(c, k);
            std::atomic<Word>& child = k < s.parent->key ? s.parent->left : s.parent->right;
            if (injecting) {
                leaf = s.leaf;
                if (leaf->key != k) return false;
                Word expected = word(leaf);
                if (child.compare_exchange_strong(expected, word(leaf) | kFlag)) {
                    injecting = false;
                    if (cleanup(c.tid, k, s)) return true;
                } else if (ptr<BstNode>(expected) == leaf && (expected & kBits)) {
                    cleanup(c.tid, k, s);
                }
            } else {
                if (s.leaf != leaf) return true;  // removed by a helper
                if (cleanup(c.tid, k, s)) return true;
            }
        }
    }

    bool contains(ThreadCtx& c, Key k) override {
        Ebr::Guard g(ebr_, c.tid);
        return seek(c, k).leaf->key == k;
    }

    std::vector<Key> snapshot() const override {
        std::vector<Key> out;
        collect(word(r_), out);
        return out;
    }
    std::vector<const void*> node_addresses() const override {
        std::vector<const void*> out;
        addresses(word(r_), out);
        return out;
    }
    Ebr::Stats reclamation() const override { return ebr_.stats(); }
    std::size_t slot_size() const override { return pool_.slot_size(); }

private:
    struct Seek {
        BstNode* ancestor;
        BstNode* successor;
        BstNode* parent;
        BstNode* leaf;
    };

    BstNode* make(int tid, Key k, BstNode* l, BstNode* r) {
        return new (pool_.alloc(tid)) BstNode{k, {word(l)}, {word(r)}};
    }

    Seek seek(ThreadCtx& c, Key k) {
        Seek s{r_, s_, s_, nullptr};
        c.visit(r_->key);
        c.visit(s_->key);
        Word parent_field = s_->left.load();
        s.leaf = ptr<BstNode>(parent_field);
        Word current_field = s.leaf->left.load();
        BstNode* current = ptr<BstNode>(current_field);
        while (current) {
            c.visit(s.leaf->key);  // internal node being routed through
            if (!(parent_field & kTag)) {
                s.ancestor = s.parent;
                s.successor = s.leaf;
            }
            s.parent = s.leaf;
            s.leaf = current;
            parent_field = current_field;
            current_field = k < current->key ? current->left.load() : current->right.load();
            current = ptr<BstNode>(current_field);
        }
        return s;
    }

    bool cleanup(int tid, Key k, const Seek& s) {
        std::atomic<Word>& succ_addr = k < s.ancestor->key ? s.ancestor->left : s.ancestor->right;
        std::atomic<Word>* child_addr = k < s.parent->key ? &s.parent->left : &s.parent->right;
        std::atomic<Word>* sibling_addr = k < s.parent->key ? &s.parent->right : &s.parent->left;
        if (!(child_addr->load() & kFlag)) std::swap(child_addr, sibling_addr);  // sibling is the one leaving
        sibling_addr->fetch_or(kTag);
        const Word sibling = sibling_addr->load();
        Word expected = word(s.successor);
        if (!succ_addr.compare_exchange_strong(expected, (sibling & ~kBits) | (sibling & kFlag))) return false;
        // The spliced chain is frozen (every edge tagged or flagged); retire it.
        BstNode* n = s.successor;
        while (n != s.parent) {
            const bool go_left = k < n->key;
            BstNode* next = ptr<BstNode>((go_left ? n->left : n->right).load());
            retire(tid, ptr<BstNode>((go_left ? n->right : n->left).load()));
            retire(tid, n);
            n = next;
        }
        retire(tid, ptr<BstNode>(child_addr->load()));
        retire(tid, s.parent);
        return true;
    }

    void retire(int tid, BstNode* n) { ebr_.retire(tid, n, &NodePool::reclaim, &pool_); }

    void free_subtree(Word w) {
        BstNode* n = ptr<BstNode>(w);
        if (!n) return;
        free_subtree(n->left.load());
        free_subtree(n->right.load());
        pool_.free(0, n);
    }
    void collect(Word w, std::vector<Key>& out) const {
        BstNode* n = ptr<BstNode>(w);
        if (n->leaf()) {
            if (n->key < inf0_ && !(w & kFlag)) out.push_back(n->key);
            return;
        }
        collect(n->left.load(), out);
        collect(n->right.load(), out);
    }
    void addresses(Word w, std::vector<const void*>& out) const {
        BstNode* n = ptr<BstNode>(w);
        if (!n) return;
        out.push_back(n);
        addresses(n->left.load(), out);
        addresses(n->right.load(), out);
    }

    Key inf0_, inf1_, inf2_;
    Ebr ebr_;
    NodePool pool_;
    BstNode* r_ = nullptr;
    BstNode* s_ = nullptr;
};

}  // namespace

std::unique_ptr<ConcurrentSet> make_concurrent_set(const ResolvedStructure& s, Key key_range, int threads) {
    const bool packed = s.spec.layout == Layout::Packed;
    switch (s.spec.kind) {
        case StructureKind::LinkedList:
            return std::make_unique<ChainedSet>(key_range, static_cast<int>(std::max<Key>(key_range, 1)), packed, threads);
        case StructureKind::HashTable: return std::make_unique<ChainedSet>(key_range, s.spec.load_factor, packed, threads);
        case StructureKind::SkipList:
            return std::make_unique<SkipListSet>(key_range, s.h_max, s.spec.appearance_prob, threads);
        case StructureKind::ExternalBst: return std::make_unique<NatarajanBst>(key_range, packed, threads);
    }
    throw std::invalid_argument("unsupported structure");
}

}  // namespace lfperf::harness
